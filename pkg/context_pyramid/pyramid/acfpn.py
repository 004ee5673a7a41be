"""Assembly of the full pyramid: backbone, CEM, attention and the top-down pathway"""

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from context_pyramid.attention import add_attention
from context_pyramid.cem import add_cem
from context_pyramid.config import NetworkConfig
from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.graph import (
    GraphBuilder,
    GraphGradients,
    GraphValues,
    GraphWeights,
    LayerGraph,
    backprop_graph,
    graph_grad_check,
    run_graph,
)
from context_pyramid.logging import get_logger
from context_pyramid.ops.conv_spec import ConvSpec
from context_pyramid.types import Tensor

from .backbone import IMAGE_CHANNELS, IMAGE_INPUT, add_backbone, check_image

SMOOTHING = ConvSpec.square(3, padding=1)


def acfpn_build(config: NetworkConfig) -> LayerGraph:
    """
    Graph of the whole network from image to pyramid levels.

    The attention-fused context feature is the apex M5 of the top-down pathway;
    each finer level adds a 1x1 lateral projection of its backbone stage to the
    nearest-neighbour upsampled coarser level, then smooths it with a 3x3 conv.
    """
    builder = GraphBuilder()
    builder.input(IMAGE_INPUT, IMAGE_CHANNELS)
    stages = add_backbone(builder, IMAGE_INPUT, config.backbone)
    context = add_cem(builder, stages["f5"], config.cem)
    merged = add_attention(builder, context, stages["f5"], config.attention)

    lateral_channels = config.pyramid.lateral_channels
    levels = {"p5": builder.conv("p5", merged, lateral_channels, SMOOTHING)}
    for k in (4, 3, 2):
        lateral = builder.conv(
            f"lateral_f{k}",
            stages[f"f{k}"],
            lateral_channels,
            ConvSpec.square(1),
        )
        upsampled = builder.nearest_upsample(f"topdown_upsample_{k}", merged)
        merged = builder.add(f"topdown_merge_{k}", [lateral, upsampled])
        levels[f"p{k}"] = builder.conv(f"p{k}", merged, lateral_channels, SMOOTHING)
    levels["p6"] = builder.max_pool("p6", levels["p5"], ConvSpec.square(1, stride=2))
    return builder.build([levels[level.value] for level in config.pyramid.levels])


def run_acfpn(
    image: Tensor, weights: GraphWeights, config: NetworkConfig
) -> GraphValues:
    """Every intermediate value of the network, including attention maps"""
    check_image(image)
    graph = acfpn_build(config)
    get_logger().debug(
        f"Running pyramid with {len(graph)} nodes on image of shape {image.shape}."
    )
    return run_graph(graph, weights, {IMAGE_INPUT: image})


def acfpn_forward(
    image: Tensor, weights: GraphWeights, config: NetworkConfig
) -> dict[str, Tensor]:
    """
    Pyramid levels P2..P6 for an image.

    Raises:
        ContextPyramidShapeError: if the image sides are not divisible by 32 or weights do not fit
    """
    values = run_acfpn(image, weights, config)
    return {level.value: values[level.value] for level in config.pyramid.levels}


def pyramid_backward(
    image: Tensor,
    weights: GraphWeights,
    config: NetworkConfig,
    grad_levels: Mapping[str, Tensor],
) -> GraphGradients:
    """
    Gradients of every parameter and of the image given upstream gradients per level.

    Levels missing from `grad_levels` contribute nothing.
    """
    unknown = set(grad_levels) - {level.value for level in config.pyramid.levels}
    if unknown:
        msg = f"Gradients given for levels {sorted(unknown)} that the network does not output."
        raise ContextPyramidShapeError(msg)
    graph = acfpn_build(config)
    values = run_acfpn(image, weights, config)
    return backprop_graph(graph, weights, values, grad_levels)


def pyramid_grad_check(
    image: Tensor,
    weights: GraphWeights,
    config: NetworkConfig,
    epsilon: float = 1e-6,
    *,
    max_samples: int | None = None,
    seed: int = 0,
) -> float:
    """Finite-difference check of the full network with a sum-of-levels loss"""
    check_image(image)
    return graph_grad_check(
        acfpn_build(config),
        weights,
        {IMAGE_INPUT: image},
        epsilon,
        max_samples=max_samples,
        seed=seed,
    )


def level_strides(config: NetworkConfig) -> dict[str, int]:
    return {level.value: level.stride for level in config.pyramid.levels}


@dataclass(frozen=True)
class LevelSummary:
    shape: tuple[int, ...]
    minimum: float
    maximum: float
    mean: float


def level_summary(levels: Mapping[str, Tensor]) -> dict[str, LevelSummary]:
    """Shape, minimum, maximum and mean of each level"""
    return {
        name: LevelSummary(
            shape=tuple(int(size) for size in tensor.shape),
            minimum=float(np.min(tensor)) if tensor.size else 0.0,
            maximum=float(np.max(tensor)) if tensor.size else 0.0,
            mean=float(np.mean(tensor)) if tensor.size else 0.0,
        )
        for name, tensor in levels.items()
    }
