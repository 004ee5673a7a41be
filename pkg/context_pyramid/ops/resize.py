"""Spatial resampling: bilinear resize and nearest-neighbour upsampling"""

import numpy as np

from context_pyramid.exceptions import ContextPyramidValueError
from context_pyramid.types import Tensor

from .registry import register_op
from .tensor import GradPair, check_same_shape, check_tensor


def interpolation_matrix(in_size: int, out_size: int, dtype: np.dtype) -> Tensor:
    """
    Rows of 1-d linear interpolation weights with half-pixel centres.

    Source coordinates are (dst + 0.5) * in / out - 0.5, clamped below at zero,
    and neighbours beyond the last pixel are clamped to it.
    """
    matrix = np.zeros((out_size, in_size), dtype=np.float64)
    if in_size == 0:
        return matrix.astype(dtype)
    dst = np.arange(out_size)
    src = np.maximum((dst + 0.5) * (in_size / out_size) - 0.5, 0.0)
    lower = np.minimum(np.floor(src).astype(np.int64), in_size - 1)
    upper = np.minimum(lower + 1, in_size - 1)
    frac = src - lower
    np.add.at(matrix, (dst, lower), 1.0 - frac)
    np.add.at(matrix, (dst, upper), frac)
    return matrix.astype(dtype)


def _check_size(out_h: int, out_w: int) -> None:
    if out_h < 1 or out_w < 1:
        msg = f"Resize target must be at least 1x1, got {out_h}x{out_w}."
        raise ContextPyramidValueError(msg)


def bilinear_resize(input: Tensor, out_h: int, out_w: int) -> Tensor:  # noqa: A002
    """Bilinear interpolation (align-corners false) to an out_h x out_w grid"""
    check_tensor(input)
    _check_size(out_h, out_w)
    rows = interpolation_matrix(input.shape[2], out_h, input.dtype)
    cols = interpolation_matrix(input.shape[3], out_w, input.dtype)
    return np.matmul(np.matmul(rows, input), cols.T)


def bilinear_resize_backward(
    input: Tensor, out_h: int, out_w: int, grad_out: Tensor  # noqa: A002
) -> GradPair:
    """Scatter upstream gradients back through the interpolation weights"""
    value = bilinear_resize(input, out_h, out_w)
    check_same_shape(grad_out, value, ("grad_out", "output"))
    rows = interpolation_matrix(input.shape[2], out_h, input.dtype)
    cols = interpolation_matrix(input.shape[3], out_w, input.dtype)
    return GradPair(
        value=value, grads={"input": np.matmul(np.matmul(rows.T, grad_out), cols)}
    )


def nearest_upsample(input: Tensor, scale: int = 2) -> Tensor:  # noqa: A002
    """Replicate every pixel into a scale x scale block"""
    check_tensor(input)
    if scale < 1:
        msg = f"Upsampling scale must be positive, got {scale}."
        raise ContextPyramidValueError(msg)
    return input.repeat(scale, axis=2).repeat(scale, axis=3)


def nearest_upsample_backward(
    input: Tensor, grad_out: Tensor, scale: int = 2  # noqa: A002
) -> GradPair:
    value = nearest_upsample(input, scale)
    check_same_shape(grad_out, value, ("grad_out", "output"))
    n, c, h, w = input.shape
    grad_input = grad_out.reshape(n, c, h, scale, w, scale).sum(axis=(3, 5))
    return GradPair(value=value, grads={"input": grad_input})


register_op(
    "bilinear_resize",
    forward=bilinear_resize,
    backward=bilinear_resize_backward,
    inputs=("input",),
)
register_op(
    "nearest_upsample",
    forward=nearest_upsample,
    backward=nearest_upsample_backward,
    inputs=("input",),
)
