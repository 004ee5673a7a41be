"""Context extraction module: dense multi-path dilated convolutions plus global context"""

from context_pyramid.config import CemConfig
from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.graph import (
    GraphBuilder,
    GraphWeights,
    LayerGraph,
    run_graph,
)
from context_pyramid.logging import get_logger
from context_pyramid.ops.conv_spec import ConvSpec
from context_pyramid.ops.tensor import check_tensor
from context_pyramid.types import Tensor

CEM_INPUT = "f5"
CEM_OUTPUT = "cem_reduce_1x1"

POINTWISE = ConvSpec.square(1)


def channel_plan(config: CemConfig) -> list[int]:
    """Input width of each path's 1x1 reduction"""
    if config.use_dense:
        return [
            config.in_channels + k * config.path_channels for k in range(config.paths)
        ]
    return [config.in_channels] * config.paths


def dense_parameter_delta(config: CemConfig) -> int:
    """Extra parameters that dense connections add to the 1x1 reductions"""
    dense = channel_plan(config.model_copy(update={"use_dense": True}))
    return sum(width - config.in_channels for width in dense) * config.mid_channels


def add_cem(builder: GraphBuilder, source: str, config: CemConfig) -> str:
    """
    Append the context extraction module reading `source`.

    Returns:
        the name of the output node
    """
    if builder.width(source) != config.in_channels:
        msg = f"CEM expects {config.in_channels} input channels but '{source}' has {builder.width(source)}."
        raise ContextPyramidShapeError(msg)
    running = source
    path_outputs: list[str] = []
    for k, rate in enumerate(config.rates, start=1):
        reduced = builder.conv(
            f"cem_{rate}_1x1",
            running if config.use_dense else source,
            config.mid_channels,
            POINTWISE,
            relu=True,
        )
        path = builder.conv(
            f"cem_{rate}_3x3",
            reduced,
            config.path_channels,
            ConvSpec.square(3, padding=rate, dilation=rate),
            relu=True,
            deformable=config.use_deformable,
        )
        path_outputs.append(path)
        if config.use_dense and k < config.paths:
            running = builder.concat(f"cem_concat_{k}", [running, path])

    pooled = builder.global_avg_pool("cem_global_context", source)
    context = builder.conv(
        "cem_gc_reduce_1x1", pooled, config.path_channels, POINTWISE, relu=True
    )
    upsampled = builder.resize_like("cem_gc_upsample", context, source)
    fused = builder.concat(f"cem_concat_{config.paths}", [*path_outputs, upsampled])
    return builder.conv(CEM_OUTPUT, fused, config.out_channels, POINTWISE, relu=True)


def cem_build(config: CemConfig) -> LayerGraph:
    """Graph of the context extraction module over a single F5 input"""
    builder = GraphBuilder()
    builder.input(CEM_INPUT, config.in_channels)
    output = add_cem(builder, CEM_INPUT, config)
    return builder.build([output])


def cem_forward(graph: LayerGraph, weights: GraphWeights, f5: Tensor) -> Tensor:
    """
    Run a graph built by `cem_build` on an F5 feature map.

    Raises:
        ContextPyramidShapeError: if the channels of `f5` do not match the graph
    """
    check_tensor(f5, "f5")
    expected = graph.node(CEM_INPUT).out_channels
    if f5.shape[1] != expected:
        msg = f"CEM expects {expected} input channels but F5 has shape {f5.shape}."
        raise ContextPyramidShapeError(msg)
    get_logger().debug(f"Running CEM on F5 of shape {f5.shape}.")
    values = run_graph(graph, weights, {CEM_INPUT: f5})
    return values[graph.outputs[0]]
