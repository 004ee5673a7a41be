from pathlib import Path
from typing import TypeAlias

import numpy as np
import numpy.typing as npt

PathType = str | Path

# Dense rank-4 NCHW array of float32 or float64
Tensor: TypeAlias = npt.NDArray[np.floating]  # noqa: UP040

Shape4: TypeAlias = tuple[int, int, int, int]  # noqa: UP040
