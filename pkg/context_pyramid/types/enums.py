from enum import UNIQUE, Enum, verify

import numpy as np


@verify(UNIQUE)
class InputDistribution(str, Enum):
    NORMAL = "normal"
    UNIFORM = "uniform"
    ZEROS = "zeros"


@verify(UNIQUE)
class InputKind(str, Enum):
    FILE = "file"
    SYNTHETIC = "synthetic"


@verify(UNIQUE)
class OpKind(str, Enum):
    """Kinds of node in a LayerGraph."""

    ADD = "add"
    AFFINITY = "affinity"
    ATTN_COLLAPSE = "attn_collapse"
    BILINEAR_RESIZE = "bilinear_resize"
    CONCAT = "concat"
    CONV = "conv"
    DEFORM_CONV = "deform_conv"
    GLOBAL_AVG_POOL = "global_avg_pool"
    INPUT = "input"
    MAX_POOL = "max_pool"
    MUL_ATTENTION = "mul_attention"
    NEAREST_UPSAMPLE = "nearest_upsample"


@verify(UNIQUE)
class Precision(str, Enum):
    SINGLE = "single"
    DOUBLE = "double"

    @property
    def dtype(self) -> type[np.floating]:
        return np.float32 if self is Precision.SINGLE else np.float64


@verify(UNIQUE)
class PrecisionFlag(str, Enum):
    """Command line spelling of a precision"""

    F32 = "f32"
    F64 = "f64"

    @property
    def precision(self) -> Precision:
        return Precision.SINGLE if self is PrecisionFlag.F32 else Precision.DOUBLE


@verify(UNIQUE)
class PyramidLevel(str, Enum):
    """Output levels of the feature pyramid, named by log2 of their stride"""

    P2 = "p2"
    P3 = "p3"
    P4 = "p4"
    P5 = "p5"
    P6 = "p6"

    @property
    def stride(self) -> int:
        return int(2 ** int(self.value[1:]))
