from .annotated_types import (
    ChannelWidth,
    DilationRates,
    Epsilon,
    ImageShape,
    Seed,
    StageWidths,
    Tolerance,
    UniqueList,
)
from .enums import (
    InputDistribution,
    InputKind,
    OpKind,
    Precision,
    PrecisionFlag,
    PyramidLevel,
)
from .types import PathType, Shape4, Tensor

__all__ = [
    "ChannelWidth",
    "DilationRates",
    "Epsilon",
    "ImageShape",
    "InputDistribution",
    "InputKind",
    "OpKind",
    "PathType",
    "Precision",
    "PrecisionFlag",
    "PyramidLevel",
    "Seed",
    "Shape4",
    "StageWidths",
    "Tensor",
    "Tolerance",
    "UniqueList",
]
