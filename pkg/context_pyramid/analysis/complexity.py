"""Parameter and multiply-accumulate accounting over a LayerGraph"""

from __future__ import annotations

from math import prod

from pydantic import BaseModel, ConfigDict, computed_field

from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.graph import LayerGraph, LayerNode, infer_shapes
from context_pyramid.types import OpKind, Shape4

from .receptive_field import RfSpec, graph_receptive_fields

# MACs spent on each bilinear sample of a deformable tap
BILINEAR_SAMPLE_MACS = 4


def node_params(node: LayerNode) -> int:
    return sum(prod(shape) for shape in node.parameter_shapes().values())


def count_params(graph: LayerGraph) -> int:
    """
    Trainable scalars of every convolution, including deformable offset branches.

    Raises:
        ContextPyramidShapeError: if a convolution node has unresolved widths
    """
    for node in graph.parameter_nodes:
        if not node.in_channels or not node.out_channels:
            msg = f"Node '{node.name}' has unresolved channel widths."
            raise ContextPyramidShapeError(msg)
    return sum(node_params(node) for node in graph)


def node_macs(
    node: LayerNode, inputs: list[Shape4], output: Shape4
) -> int:
    """Multiply-accumulates of one node for a single image"""
    _, co, oh, ow = output
    if any(prod(shape[1:]) == 0 for shape in inputs) or prod(output[1:]) == 0:
        return 0
    match node.kind:
        case OpKind.CONV if node.spec:
            return co * inputs[0][1] * node.spec.taps * oh * ow
        case OpKind.DEFORM_CONV if node.spec:
            ci, taps = inputs[0][1], node.spec.taps
            main = co * ci * taps * oh * ow
            offsets = 2 * taps * ci * taps * oh * ow
            sampling = BILINEAR_SAMPLE_MACS * ci * taps * oh * ow
            return main + offsets + sampling
        case OpKind.AFFINITY:
            _, channels, h, w = inputs[0]
            return channels * (h * w) ** 2
        case OpKind.ATTN_COLLAPSE:
            return prod(inputs[0][1:])
        case (
            OpKind.GLOBAL_AVG_POOL
            | OpKind.MAX_POOL
            | OpKind.BILINEAR_RESIZE
            | OpKind.NEAREST_UPSAMPLE
            | OpKind.MUL_ATTENTION
        ):
            return prod(output[1:])
        case OpKind.ADD:
            return prod(output[1:]) * (len(inputs) - 1)
    return 0


def _single_image(graph: LayerGraph, input_size: tuple[int, int]) -> dict[str, Shape4]:
    height, width = input_size
    return infer_shapes(
        graph,
        {
            node.name: (1, node.out_channels or 0, height, width)
            for node in graph.input_nodes
        },
    )


def count_macs(graph: LayerGraph, input_size: tuple[int, int]) -> int:
    """
    Multiply-accumulates for one image whose inputs all have the given (h, w).

    Raises:
        ContextPyramidShapeError: if the input size does not fit the graph's windows
    """
    shapes = _single_image(graph, input_size)
    return sum(
        node_macs(node, [shapes[name] for name in node.inputs], shapes[node.name])
        for node in graph
        if node.kind != OpKind.INPUT
    )


class NodeComplexity(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    kind: OpKind
    output_shape: Shape4
    params: int
    macs: int
    receptive_field: RfSpec | None = None


class ComplexityReport(BaseModel):
    """Per-node and total parameter and MAC counts at one input size"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    input_size: tuple[int, int]
    nodes: tuple[NodeComplexity, ...]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def total_params(self) -> int:
        return sum(node.params for node in self.nodes)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def total_macs(self) -> int:
        return sum(node.macs for node in self.nodes)

    def node(self, name: str) -> NodeComplexity:
        for node in self.nodes:
            if node.name == name:
                return node
        msg = f"Report has no node named '{name}'."
        raise ContextPyramidShapeError(msg)

    def merge(self, other: ComplexityReport) -> ComplexityReport:
        """Combined report of two graphs evaluated on the same image"""
        return ComplexityReport(
            input_size=self.input_size, nodes=(*self.nodes, *other.nodes)
        )

    def to_key_values(self, prefix: str = "") -> list[str]:
        """Machine-readable `key = value` lines"""
        lines = [
            f"{prefix}total_params = {self.total_params}",
            f"{prefix}total_macs = {self.total_macs}",
        ]
        for node in self.nodes:
            lines.append(f"{prefix}{node.name}.params = {node.params}")
            lines.append(f"{prefix}{node.name}.macs = {node.macs}")
            if node.receptive_field is not None:
                rf = node.receptive_field
                lines.append(
                    f"{prefix}{node.name}.rf = {'global' if rf.is_global else rf.rf[0]}"
                )
        return lines


def complexity_report(
    graph: LayerGraph,
    input_size: tuple[int, int],
    *,
    initial: RfSpec | None = None,
    receptive_fields: bool = True,
) -> ComplexityReport:
    """
    Parameters, MACs and optionally receptive fields of every non-input node.

    `initial` describes the receptive field of the graph inputs, for example the
    stride-32 field of F5 when reporting on a CEM graph in isolation.
    """
    shapes = _single_image(graph, input_size)
    fields = graph_receptive_fields(graph, initial) if receptive_fields else {}
    nodes = tuple(
        NodeComplexity(
            name=node.name,
            kind=node.kind,
            output_shape=shapes[node.name],
            params=node_params(node),
            macs=node_macs(node, [shapes[name] for name in node.inputs], shapes[node.name]),
            receptive_field=fields.get(node.name),
        )
        for node in graph
        if node.kind != OpKind.INPUT
    )
    return ComplexityReport(input_size=input_size, nodes=nodes)
