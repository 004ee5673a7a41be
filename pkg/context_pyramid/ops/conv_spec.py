"""Geometry of a two-dimensional sliding window"""

from __future__ import annotations

from typing import Annotated

from annotated_types import Ge, Gt
from pydantic import BaseModel, ConfigDict

from context_pyramid.exceptions import ContextPyramidShapeError

PositivePair = tuple[Annotated[int, Gt(0)], Annotated[int, Gt(0)]]
NonNegativePair = tuple[Annotated[int, Ge(0)], Annotated[int, Ge(0)]]


class ConvSpec(BaseModel):
    """
    Kernel, stride, padding and dilation of a convolution or pooling window.

    The output extent along each axis is
    floor((in + 2p - d(k - 1) - 1) / s) + 1.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kernel: PositivePair = (1, 1)
    stride: PositivePair = (1, 1)
    padding: NonNegativePair = (0, 0)
    dilation: PositivePair = (1, 1)

    @classmethod
    def square(
        cls, kernel: int, *, stride: int = 1, padding: int = 0, dilation: int = 1
    ) -> ConvSpec:
        return cls(
            kernel=(kernel, kernel),
            stride=(stride, stride),
            padding=(padding, padding),
            dilation=(dilation, dilation),
        )

    @property
    def taps(self) -> int:
        return self.kernel[0] * self.kernel[1]

    def output_size(self, height: int, width: int) -> tuple[int, int]:
        sizes = []
        for size, k, s, p, d in zip(
            (height, width),
            self.kernel,
            self.stride,
            self.padding,
            self.dilation,
            strict=True,
        ):
            out = (size + 2 * p - d * (k - 1) - 1) // s + 1
            if out < 0:
                msg = f"Window {self.kernel} with dilation {self.dilation} and padding {self.padding} does not fit an input of size {(height, width)}."
                raise ContextPyramidShapeError(msg)
            sizes.append(out)
        return (sizes[0], sizes[1])
