"""Desk-scale stand-in for a residual backbone producing the F2..F5 ladder"""

from context_pyramid.config import BackboneConfig
from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.graph import GraphBuilder, GraphWeights, LayerGraph, run_graph
from context_pyramid.ops.conv_spec import ConvSpec
from context_pyramid.ops.tensor import check_tensor
from context_pyramid.types import Tensor

IMAGE_INPUT = "image"
IMAGE_CHANNELS = 3
STAGES = ("f2", "f3", "f4", "f5")
# Total stride of F5 with respect to the image
MAX_STRIDE = 32


def stage_node(stage: str) -> str:
    return f"backbone_{stage}"


def add_backbone(builder: GraphBuilder, source: str, config: BackboneConfig) -> dict[str, str]:
    """
    Stride-2 stem and max pool, then four 3x3 stages.

    F2 keeps the stride-4 resolution of the pooled stem; each later stage halves
    it, giving strides 4, 8, 16 and 32.

    Returns:
        the node name of each stage output
    """
    stem = builder.conv(
        "backbone_stem",
        source,
        config.stem_channels,
        ConvSpec.square(3, stride=2, padding=1),
        relu=True,
    )
    current = builder.max_pool("backbone_pool", stem, ConvSpec.square(2, stride=2))
    nodes: dict[str, str] = {}
    for index, (stage, width) in enumerate(zip(STAGES, config.stage_channels, strict=True)):
        current = builder.conv(
            stage_node(stage),
            current,
            width,
            ConvSpec.square(3, stride=1 if index == 0 else 2, padding=1),
            relu=True,
        )
        nodes[stage] = current
    return nodes


def backbone_build(config: BackboneConfig) -> LayerGraph:
    builder = GraphBuilder()
    builder.input(IMAGE_INPUT, IMAGE_CHANNELS)
    nodes = add_backbone(builder, IMAGE_INPUT, config)
    return builder.build(list(nodes.values()))


def check_image(image: Tensor) -> None:
    """Ensure an image is NCHW with three channels and sides divisible by 32"""
    check_tensor(image, "image")
    _, c, h, w = image.shape
    if c != IMAGE_CHANNELS:
        msg = f"Expected a three-channel image, got shape {image.shape}."
        raise ContextPyramidShapeError(msg)
    if h % MAX_STRIDE or w % MAX_STRIDE:
        msg = f"Image height and width must be divisible by {MAX_STRIDE}, got {h}x{w}."
        raise ContextPyramidShapeError(msg)


def backbone_forward(
    image: Tensor, weights: GraphWeights, config: BackboneConfig
) -> dict[str, Tensor]:
    """
    Run the backbone stub.

    Raises:
        ContextPyramidShapeError: if the image sides are not divisible by 32
    """
    check_image(image)
    values = run_graph(backbone_build(config), weights, {IMAGE_INPUT: image})
    return {stage: values[stage_node(stage)] for stage in STAGES}
