"""Deformable convolution: dilated taps displaced by learned fractional offsets"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.ops.conv import (
    conv2d,
    conv2d_backward,
    conv_from_columns,
)
from context_pyramid.ops.conv_spec import ConvSpec
from context_pyramid.ops.registry import register_op
from context_pyramid.ops.tensor import (
    GradPair,
    check_same_shape,
    check_tensor,
    check_vector,
)
from context_pyramid.types import Tensor

# Offsets of the four bilinear neighbours relative to the floor of a sample
_CORNERS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class DeformConv2d:
    """
    Parameters of a deformable convolution.

    The offset branch is a sibling convolution sharing `spec`, producing one
    (dy, dx) pair per kernel tap: channel 2k holds dy and channel 2k + 1 holds dx
    for tap k in row-major kernel order.
    """

    weight: Tensor
    bias: Tensor
    offset_weight: Tensor
    offset_bias: Tensor
    spec: ConvSpec

    def __post_init__(self) -> None:
        check_tensor(self.weight, "weight")
        check_tensor(self.offset_weight, "offset_weight")
        co, ci, kh, kw = self.weight.shape
        check_vector(self.bias, co, "bias")
        if (kh, kw) != self.spec.kernel:
            msg = f"Weight kernel {(kh, kw)} does not match convolution kernel {self.spec.kernel}."
            raise ContextPyramidShapeError(msg)
        offset_channels = 2 * kh * kw
        if self.offset_weight.shape != (offset_channels, ci, kh, kw):
            msg = f"Offset weight must have shape {(offset_channels, ci, kh, kw)}, got {self.offset_weight.shape}."
            raise ContextPyramidShapeError(msg)
        check_vector(self.offset_bias, offset_channels, "offset_bias")

    @classmethod
    def with_zero_offsets(
        cls, weight: Tensor, bias: Tensor, spec: ConvSpec
    ) -> DeformConv2d:
        """A deformable layer that starts out as a plain dilated convolution"""
        _, ci, kh, kw = weight.shape
        return cls(
            weight=weight,
            bias=bias,
            offset_weight=np.zeros((2 * kh * kw, ci, kh, kw), dtype=weight.dtype),
            offset_bias=np.zeros(2 * kh * kw, dtype=weight.dtype),
            spec=spec,
        )


def _check_input(input: Tensor, layer: DeformConv2d) -> tuple[int, int]:  # noqa: A002
    check_tensor(input, "input")
    if input.shape[1] != layer.weight.shape[1]:
        msg = f"Deformable convolution expects {layer.weight.shape[1]} input channels but received input of shape {input.shape}."
        raise ContextPyramidShapeError(msg)
    return layer.spec.output_size(*input.shape[2:])


def sampling_positions(offsets: Tensor, spec: ConvSpec) -> tuple[Tensor, Tensor]:
    """
    Absolute (y, x) sampling coordinates of every tap at every output position.

    Returns:
        two arrays of shape (n, kh * kw, oh, ow)
    """
    _, _, oh, ow = offsets.shape
    kh, kw = spec.kernel
    sh, sw = spec.stride
    ph, pw = spec.padding
    dh, dw = spec.dilation
    rows = (np.arange(oh) * sh - ph).astype(offsets.dtype)
    cols = (np.arange(ow) * sw - pw).astype(offsets.dtype)
    tap_rows = (np.repeat(np.arange(kh), kw) * dh).astype(offsets.dtype)
    tap_cols = (np.tile(np.arange(kw), kh) * dw).astype(offsets.dtype)
    y = (
        rows[np.newaxis, np.newaxis, :, np.newaxis]
        + tap_rows[np.newaxis, :, np.newaxis, np.newaxis]
        + offsets[:, 0::2]
    )
    x = (
        cols[np.newaxis, np.newaxis, np.newaxis, :]
        + tap_cols[np.newaxis, :, np.newaxis, np.newaxis]
        + offsets[:, 1::2]
    )
    return y, x


@dataclass(frozen=True)
class _Corner:
    rows: np.ndarray
    cols: np.ndarray
    valid: np.ndarray
    weight: Tensor
    values: Tensor


def _corners(input: Tensor, y: Tensor, x: Tensor) -> list[_Corner]:  # noqa: A002
    """The four bilinear neighbours of each sample, zero outside the input"""
    n, _, h, w = input.shape
    floor_y = np.floor(y)
    floor_x = np.floor(x)
    frac_y = y - floor_y
    frac_x = x - floor_x
    batch = np.arange(n).reshape(n, *([1] * (y.ndim - 1)))
    corners = []
    for step_y, step_x in _CORNERS:
        rows = floor_y.astype(np.int64) + step_y
        cols = floor_x.astype(np.int64) + step_x
        valid = (rows >= 0) & (rows < h) & (cols >= 0) & (cols < w)
        weight = (frac_y if step_y else 1.0 - frac_y) * (
            frac_x if step_x else 1.0 - frac_x
        )
        # Advanced indices around a slice put the channel axis last
        values = input[batch, :, np.clip(rows, 0, max(h - 1, 0)), np.clip(cols, 0, max(w - 1, 0))]
        values = np.where(valid[..., np.newaxis], values, 0.0).astype(input.dtype)
        corners.append(_Corner(rows, cols, valid, weight.astype(input.dtype), values))
    return corners


def _sample(corners: list[_Corner]) -> Tensor:
    sampled = corners[0].values * corners[0].weight[..., np.newaxis]
    for corner in corners[1:]:
        sampled = sampled + corner.values * corner.weight[..., np.newaxis]
    return sampled


def bilinear_sample(map: Tensor, y: float, x: float) -> Tensor:  # noqa: A002
    """
    Bilinearly interpolate a (c, h, w) map at a fractional position.

    Coordinates outside [0, h) x [0, w) read zero padding.
    """
    if map.ndim != 3:
        msg = f"Expected a (c, h, w) map, got shape {map.shape}."
        raise ContextPyramidShapeError(msg)
    position_y = np.full((1, 1), y, dtype=map.dtype)
    position_x = np.full((1, 1), x, dtype=map.dtype)
    if map.shape[1] * map.shape[2] == 0:
        return np.zeros(map.shape[0], dtype=map.dtype)
    return _sample(_corners(map[np.newaxis], position_y, position_x))[0, 0]


def _sampled_columns(corners: list[_Corner]) -> Tensor:
    """Rearrange (n, taps, oh, ow, c) samples into (n, c * taps, oh * ow) columns"""
    sampled = _sample(corners)
    n, taps, oh, ow, c = sampled.shape
    return sampled.transpose(0, 4, 1, 2, 3).reshape(n, c * taps, oh * ow)


def deform_conv2d(input: Tensor, layer: DeformConv2d) -> Tensor:  # noqa: A002
    """
    Deformable convolution of an NCHW input.

    Offsets come from the sibling convolution; each tap then reads the input at
    its dilated grid location displaced by the learned (dy, dx).
    """
    output_size = _check_input(input, layer)
    offsets = conv2d(input, layer.offset_weight, layer.offset_bias, layer.spec)
    y, x = sampling_positions(offsets, layer.spec)
    if input.shape[2] * input.shape[3] == 0:
        return conv2d(input, layer.weight, layer.bias, layer.spec)
    cols = _sampled_columns(_corners(input, y, x))
    return conv_from_columns(cols, layer.weight, layer.bias, output_size)


def deform_conv2d_backward(
    input: Tensor, layer: DeformConv2d, grad_out: Tensor  # noqa: A002
) -> GradPair:
    """
    Gradients for the input, main weights and offset branch.

    Offset gradients flow through the piecewise-linear bilinear kernel; exactly
    at an integer sampling coordinate the subgradient 0 is used for that axis.
    """
    output_size = _check_input(input, layer)
    offsets = conv2d(input, layer.offset_weight, layer.offset_bias, layer.spec)
    y, x = sampling_positions(offsets, layer.spec)
    corners = _corners(input, y, x)
    cols = _sampled_columns(corners)
    value = conv_from_columns(cols, layer.weight, layer.bias, output_size)
    check_same_shape(grad_out, value, ("grad_out", "output"))

    n, co = grad_out.shape[:2]
    ci, taps = input.shape[1], layer.spec.taps
    oh, ow = output_size
    grad_2d = grad_out.reshape(n, co, oh * ow)
    grad_weight = np.matmul(grad_2d, cols.transpose(0, 2, 1)).sum(axis=0)
    grad_cols = np.matmul(layer.weight.reshape(co, -1).T, grad_2d)
    # (n, taps, oh, ow, c), matching the layout of sampled values
    grad_samples = grad_cols.reshape(n, ci, taps, oh, ow).transpose(0, 2, 3, 4, 1)

    frac_y = y - np.floor(y)
    frac_x = x - np.floor(x)
    grad_input_nhwc = np.zeros(
        (n, input.shape[2], input.shape[3], ci), dtype=input.dtype
    )
    grad_y = np.zeros(y.shape, dtype=input.dtype)
    grad_x = np.zeros(x.shape, dtype=input.dtype)
    batch = np.arange(n).reshape(n, 1, 1, 1)
    for (step_y, step_x), corner in zip(_CORNERS, corners, strict=True):
        contribution = grad_samples * corner.weight[..., np.newaxis]
        contribution = np.where(corner.valid[..., np.newaxis], contribution, 0.0)
        np.add.at(
            grad_input_nhwc,
            (
                batch,
                np.clip(corner.rows, 0, max(input.shape[2] - 1, 0)),
                np.clip(corner.cols, 0, max(input.shape[3] - 1, 0)),
            ),
            contribution,
        )
        upstream = (grad_samples * corner.values).sum(axis=-1)
        weight_x = frac_x if step_x else 1.0 - frac_x
        weight_y = frac_y if step_y else 1.0 - frac_y
        grad_y += upstream * weight_x * (1.0 if step_y else -1.0)
        grad_x += upstream * weight_y * (1.0 if step_x else -1.0)
    grad_y = np.where(frac_y == 0, 0.0, grad_y)
    grad_x = np.where(frac_x == 0, 0.0, grad_x)

    grad_offsets = np.empty(offsets.shape, dtype=input.dtype)
    grad_offsets[:, 0::2] = grad_y
    grad_offsets[:, 1::2] = grad_x
    offset_grads = conv2d_backward(
        input, layer.offset_weight, layer.offset_bias, layer.spec, grad_offsets
    ).grads

    return GradPair(
        value=value,
        grads={
            "input": grad_input_nhwc.transpose(0, 3, 1, 2) + offset_grads["input"],
            "weight": grad_weight.reshape(layer.weight.shape),
            "bias": grad_out.sum(axis=(0, 2, 3)),
            "offset_weight": offset_grads["weight"],
            "offset_bias": offset_grads["bias"],
        },
    )


def _deform_conv2d_flat(
    input: Tensor,  # noqa: A002
    weight: Tensor,
    bias: Tensor,
    offset_weight: Tensor,
    offset_bias: Tensor,
    spec: ConvSpec,
) -> Tensor:
    return deform_conv2d(
        input, DeformConv2d(weight, bias, offset_weight, offset_bias, spec)
    )


def _deform_conv2d_flat_backward(
    input: Tensor,  # noqa: A002
    weight: Tensor,
    bias: Tensor,
    offset_weight: Tensor,
    offset_bias: Tensor,
    spec: ConvSpec,
    grad_out: Tensor,
) -> GradPair:
    return deform_conv2d_backward(
        input, DeformConv2d(weight, bias, offset_weight, offset_bias, spec), grad_out
    )


register_op(
    "deform_conv2d",
    forward=_deform_conv2d_flat,
    backward=_deform_conv2d_flat_backward,
    inputs=("input", "weight", "bias", "offset_weight", "offset_bias"),
)
