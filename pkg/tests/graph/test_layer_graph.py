import pytest

from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.graph import GraphBuilder, LayerGraph, LayerNode
from context_pyramid.ops import ConvSpec
from context_pyramid.types import OpKind


class TestLayerNode:
    def test_parameter_shapes(self):
        node = LayerNode(
            name="c",
            kind=OpKind.CONV,
            inputs=("x",),
            spec=ConvSpec.square(3),
            in_channels=4,
            out_channels=8,
        )
        assert node.has_parameters
        assert node.parameter_shapes() == {"weight": (8, 4, 3, 3), "bias": (8,)}

    def test_parameter_shapes_without_bias(self):
        node = LayerNode(
            name="c",
            kind=OpKind.CONV,
            inputs=("x",),
            spec=ConvSpec(),
            in_channels=1,
            out_channels=1,
            bias=False,
        )
        assert node.parameter_shapes() == {"weight": (1, 1, 1, 1)}

    def test_parameter_shapes_deformable(self):
        node = LayerNode(
            name="d",
            kind=OpKind.DEFORM_CONV,
            inputs=("x",),
            spec=ConvSpec.square(3, padding=2, dilation=2),
            in_channels=4,
            out_channels=2,
        )
        assert node.parameter_shapes() == {
            "weight": (2, 4, 3, 3),
            "bias": (2,),
            "offset_weight": (18, 4, 3, 3),
            "offset_bias": (18,),
        }

    def test_no_parameters(self):
        node = LayerNode(name="g", kind=OpKind.GLOBAL_AVG_POOL, inputs=("x",))
        assert not node.has_parameters
        assert node.parameter_shapes() == {}

    @pytest.mark.parametrize(
        "fields,message",
        [
            ({"kind": OpKind.CONV, "inputs": ("a", "b")}, "cannot take 2 inputs"),
            ({"kind": OpKind.INPUT, "inputs": ("a",)}, "cannot take 1 inputs"),
            ({"kind": OpKind.AFFINITY, "inputs": ("a",)}, "cannot take 1 inputs"),
            ({"kind": OpKind.MAX_POOL, "inputs": ("a",)}, "needs a window spec"),
            (
                {"kind": OpKind.CONV, "inputs": ("a",), "spec": ConvSpec()},
                "needs input and output widths",
            ),
            ({"kind": OpKind.INPUT}, "needs a channel width"),
            ({"kind": OpKind.BILINEAR_RESIZE, "inputs": ("a",)}, "take its size from"),
        ],
    )
    def test_invalid(self, fields, message):
        with pytest.raises(ValueError, match=message):
            LayerNode(name="n", **fields)


class TestLayerGraph:
    def test_iteration(self, branching_graph):
        assert len(branching_graph) == 7
        assert [node.name for node in branching_graph][:3] == ["x", "left", "right"]
        assert "both" in branching_graph
        assert "missing" not in branching_graph

    def test_node(self, branching_graph):
        assert branching_graph.node("left").relu
        with pytest.raises(ContextPyramidShapeError, match="no node named 'missing'"):
            branching_graph.node("missing")

    def test_input_and_parameter_nodes(self, branching_graph):
        assert [node.name for node in branching_graph.input_nodes] == ["x"]
        assert [node.name for node in branching_graph.parameter_nodes] == [
            "left",
            "right",
        ]

    def test_duplicate_name(self):
        node = LayerNode(name="x", kind=OpKind.INPUT, out_channels=1)
        with pytest.raises(ValueError, match="used more than once"):
            LayerGraph(nodes=(node, node), outputs=("x",))

    def test_forward_reference(self):
        nodes = (
            LayerNode(name="pool", kind=OpKind.GLOBAL_AVG_POOL, inputs=("x",)),
            LayerNode(name="x", kind=OpKind.INPUT, out_channels=1),
        )
        with pytest.raises(ValueError, match="not defined before it"):
            LayerGraph(nodes=nodes, outputs=("pool",))

    def test_unknown_output(self):
        node = LayerNode(name="x", kind=OpKind.INPUT, out_channels=1)
        with pytest.raises(ValueError, match="not a node of this graph"):
            LayerGraph(nodes=(node,), outputs=("y",))


class TestGraphBuilder:
    def test_channel_tracking(self, branching_graph):
        assert branching_graph.node("left").in_channels == 2
        assert branching_graph.node("right").out_channels == 3

    def test_width(self):
        builder = GraphBuilder()
        builder.input("a", 3)
        builder.input("b", 5)
        builder.concat("ab", ["a", "b"])
        assert builder.width("ab") == 8
        assert "ab" in builder

    def test_deformable(self):
        builder = GraphBuilder()
        builder.input("x", 2)
        builder.conv("d", "x", 4, ConvSpec.square(3, padding=1), deformable=True)
        assert builder.build(["d"]).node("d").kind == OpKind.DEFORM_CONV

    def test_duplicate(self):
        builder = GraphBuilder()
        builder.input("x", 1)
        with pytest.raises(ContextPyramidShapeError, match="used more than once"):
            builder.input("x", 1)

    def test_unknown_source(self):
        builder = GraphBuilder()
        with pytest.raises(ContextPyramidShapeError, match="no static channel width"):
            builder.conv("c", "missing", 1, ConvSpec())

    def test_add_width_mismatch(self):
        builder = GraphBuilder()
        builder.input("a", 3)
        builder.input("b", 4)
        with pytest.raises(ContextPyramidShapeError, match="differing channel widths"):
            builder.add("sum", ["a", "b"])

    def test_affinity_width_mismatch(self):
        builder = GraphBuilder()
        builder.input("q", 3)
        builder.input("k", 4)
        with pytest.raises(ContextPyramidShapeError, match="same width"):
            builder.affinity("r", "q", "k")

    def test_affinity_has_no_static_width(self):
        builder = GraphBuilder()
        builder.input("q", 3)
        builder.affinity("r", "q", "q")
        with pytest.raises(ContextPyramidShapeError, match="no static channel width"):
            builder.width("r")
        assert builder.width(builder.attn_collapse("attn", "r")) == 1

    def test_mul_attention_needs_single_channel(self):
        builder = GraphBuilder()
        builder.input("v", 3)
        builder.input("attn", 2)
        with pytest.raises(ContextPyramidShapeError, match="single channel"):
            builder.mul_attention("out", "v", "attn")

    def test_resize_like_unknown(self):
        builder = GraphBuilder()
        builder.input("x", 3)
        with pytest.raises(ContextPyramidShapeError, match="takes its size from"):
            builder.resize_like("r", "x", "missing")
