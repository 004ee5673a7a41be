"""Images fed to the network: seeded synthetic tensors or PGM/PPM files"""

import numpy as np

from context_pyramid.config import InputConfig
from context_pyramid.graph import node_rng
from context_pyramid.logging import get_logger
from context_pyramid.serialisers import read_image
from context_pyramid.types import InputDistribution, InputKind, Precision, Tensor

from .backbone import check_image


def synthetic_image(
    shape: tuple[int, int, int, int] | list[int],
    distribution: InputDistribution,
    seed: int,
    precision: Precision = Precision.SINGLE,
) -> Tensor:
    rng = node_rng(seed, "input")
    match distribution:
        case InputDistribution.NORMAL:
            data = rng.standard_normal(tuple(shape))
        case InputDistribution.UNIFORM:
            data = rng.uniform(0.0, 1.0, size=tuple(shape))
        case InputDistribution.ZEROS:
            data = np.zeros(tuple(shape))
    return np.ascontiguousarray(data, dtype=precision.dtype)


def load_input(config: InputConfig, seed: int, precision: Precision) -> Tensor:
    """
    The network input described by a config section.

    Raises:
        ContextPyramidInputOutputError: if an image file cannot be read
        ContextPyramidShapeError: if an image file's sides are not divisible by 32
    """
    logger = get_logger()
    if config.kind == InputKind.FILE and config.path is not None:
        logger.info(f"Reading input image [green]{config.path}[/].")
        image = read_image(config.path)[np.newaxis].astype(precision.dtype)
    else:
        logger.info(
            f"Generating {config.distribution.value} synthetic input of shape {tuple(config.shape)}."
        )
        image = synthetic_image(config.shape, config.distribution, seed, precision)
    check_image(image)
    return image
