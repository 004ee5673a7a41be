"""Context attention (CxAM), content attention (CnAM) and their fusion with the input"""

from dataclasses import dataclass

from context_pyramid.config import AttentionConfig
from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.graph import GraphBuilder, LayerGraph, run_graph
from context_pyramid.ops.conv_spec import ConvSpec
from context_pyramid.ops.elementwise import add
from context_pyramid.ops.tensor import check_same_shape, check_tensor
from context_pyramid.types import Tensor

from .weights import CnamWeights, CxamWeights

FEATURE_INPUT = "feature"
F5_INPUT = "f5"
VALUE_INPUT = "cxam_value"
FUSED_OUTPUT = "am_fuse"

POINTWISE = ConvSpec.square(1)


@dataclass(frozen=True)
class AttentionNodes:
    """Names of the nodes an attention block added to a graph"""

    output: str
    value: str | None = None
    attention: str | None = None


def add_cxam(builder: GraphBuilder, feature: str, query_channels: int) -> AttentionNodes:
    """Query/key affinity over the feature, collapsed and applied to its value projection"""
    width = builder.width(feature)
    query = builder.conv("cxam_query", feature, query_channels, POINTWISE)
    key = builder.conv("cxam_key", feature, query_channels, POINTWISE)
    affinity = builder.affinity("cxam_affinity", query, key)
    attention = builder.attn_collapse("cxam_attention", affinity)
    value = add_value(builder, feature, width)
    output = builder.mul_attention("cxam_output", value, attention)
    return AttentionNodes(output=output, value=value, attention=attention)


def add_value(builder: GraphBuilder, feature: str, channels: int) -> str:
    if VALUE_INPUT in builder:
        return VALUE_INPUT
    return builder.conv(VALUE_INPUT, feature, channels, POINTWISE)


def add_cnam(
    builder: GraphBuilder, f5: str, value: str, query_channels: int
) -> AttentionNodes:
    """Affinity over the backbone feature, applied to the shared value projection"""
    query = builder.conv("cnam_query", f5, query_channels, POINTWISE)
    key = builder.conv("cnam_key", f5, query_channels, POINTWISE)
    affinity = builder.affinity("cnam_affinity", query, key)
    attention = builder.attn_collapse("cnam_attention", affinity)
    output = builder.mul_attention("cnam_output", value, attention)
    return AttentionNodes(output=output, attention=attention)


def add_attention(
    builder: GraphBuilder, feature: str, f5: str, config: AttentionConfig
) -> str:
    """
    Append the enabled attention modules and fuse them with `feature`.

    With both modules disabled the fused node is an identity over `feature`.
    """
    terms = [feature]
    value: str | None = None
    if config.cxam:
        cxam = add_cxam(builder, feature, config.cxam_channels)
        value = cxam.value
        terms.append(cxam.output)
    if config.cnam:
        value = value or add_value(builder, feature, builder.width(feature))
        terms.append(add_cnam(builder, f5, value, config.cnam_channels).output)
    return builder.add(FUSED_OUTPUT, terms)


def am_build(
    config: AttentionConfig, feature_channels: int, f5_channels: int
) -> LayerGraph:
    """Graph of the attention-guided module over a context feature and F5"""
    builder = GraphBuilder()
    builder.input(FEATURE_INPUT, feature_channels)
    builder.input(F5_INPUT, f5_channels)
    output = add_attention(builder, FEATURE_INPUT, F5_INPUT, config)
    return builder.build([output])


def cxam_build(in_channels: int, query_channels: int) -> LayerGraph:
    builder = GraphBuilder()
    builder.input(FEATURE_INPUT, in_channels)
    nodes = add_cxam(builder, FEATURE_INPUT, query_channels)
    return builder.build([nodes.output])


def cnam_build(f5_channels: int, value_channels: int, query_channels: int) -> LayerGraph:
    builder = GraphBuilder()
    builder.input(F5_INPUT, f5_channels)
    builder.input(VALUE_INPUT, value_channels)
    nodes = add_cnam(builder, F5_INPUT, VALUE_INPUT, query_channels)
    return builder.build([nodes.output])


def cxam_forward(f: Tensor, weights: CxamWeights) -> tuple[Tensor, Tensor, Tensor]:
    """
    Context attention over a feature map.

    Returns:
        the attended feature E, the value projection V and the attention map R'
    """
    check_tensor(f, "f")
    if f.shape[1] != weights.in_channels:
        msg = f"CxAM projections read {weights.in_channels} channels but the feature has shape {f.shape}."
        raise ContextPyramidShapeError(msg)
    graph = cxam_build(weights.in_channels, int(weights.wq.shape[0]))
    values = run_graph(graph, weights.to_graph_weights(), {FEATURE_INPUT: f})
    return values["cxam_output"], values["cxam_value"], values["cxam_attention"]


def cnam_forward(f5: Tensor, v: Tensor, weights: CnamWeights) -> tuple[Tensor, Tensor]:
    """
    Content attention driven by the backbone feature, applied to the CxAM value.

    Returns:
        the attended feature D and the attention map S'
    """
    check_tensor(f5, "f5")
    check_tensor(v, "v")
    if (f5.shape[0], *f5.shape[2:]) != (v.shape[0], *v.shape[2:]):
        msg = f"F5 {f5.shape} and the value projection {v.shape} must share batch and spatial size."
        raise ContextPyramidShapeError(msg)
    if f5.shape[1] != weights.in_channels:
        msg = f"CnAM projections read {weights.in_channels} channels but F5 has shape {f5.shape}."
        raise ContextPyramidShapeError(msg)
    graph = cnam_build(weights.in_channels, v.shape[1], int(weights.wp.shape[0]))
    values = run_graph(
        graph, weights.to_graph_weights(), {F5_INPUT: f5, VALUE_INPUT: v}
    )
    return values["cnam_output"], values["cnam_attention"]


def am_fuse(f: Tensor, e: Tensor, d: Tensor) -> Tensor:
    """Merge both attended features into the input by elementwise addition"""
    check_same_shape(f, e, ("f", "e"))
    check_same_shape(f, d, ("f", "d"))
    return add(add(f, e), d)
