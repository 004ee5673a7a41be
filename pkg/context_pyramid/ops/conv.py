"""Dilated two-dimensional cross-correlation"""

import numpy as np

from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.types import Tensor

from .conv_spec import ConvSpec
from .registry import register_op
from .tensor import GradPair, check_tensor, check_vector
from .windows import gather_windows, scatter_windows


def _check_conv_arguments(
    input: Tensor, weight: Tensor, bias: Tensor, spec: ConvSpec  # noqa: A002
) -> None:
    check_tensor(input, "input")
    check_tensor(weight, "weight")
    co, ci, kh, kw = weight.shape
    check_vector(bias, co, "bias")
    if input.shape[1] != ci:
        msg = f"Convolution expects {ci} input channels but received input of shape {input.shape}."
        raise ContextPyramidShapeError(msg)
    if (kh, kw) != spec.kernel:
        msg = f"Weight kernel {(kh, kw)} does not match convolution kernel {spec.kernel}."
        raise ContextPyramidShapeError(msg)


def columns(input: Tensor, spec: ConvSpec) -> Tensor:  # noqa: A002
    """Unfold an input into (n, c * kh * kw, oh * ow) columns"""
    windows = gather_windows(input, spec)
    n, c, taps, oh, ow = windows.shape
    return windows.reshape(n, c * taps, oh * ow)


def conv_from_columns(
    cols: Tensor, weight: Tensor, bias: Tensor, output_size: tuple[int, int]
) -> Tensor:
    """Contract unfolded columns with a weight bank and add the bias"""
    co = weight.shape[0]
    out = np.matmul(weight.reshape(co, -1), cols)
    out += bias.astype(out.dtype)[np.newaxis, :, np.newaxis]
    return out.reshape(cols.shape[0], co, *output_size)


def conv2d(
    input: Tensor, weight: Tensor, bias: Tensor, spec: ConvSpec  # noqa: A002
) -> Tensor:
    """
    Cross-correlate an NCHW input with a (co, ci, kh, kw) weight bank.

    Raises:
        ContextPyramidShapeError: if channels or kernel disagree, or the window does not fit
    """
    _check_conv_arguments(input, weight, bias, spec)
    output_size = spec.output_size(*input.shape[2:])
    return conv_from_columns(columns(input, spec), weight, bias, output_size)


def conv2d_backward(
    input: Tensor,  # noqa: A002
    weight: Tensor,
    bias: Tensor,
    spec: ConvSpec,
    grad_out: Tensor,
) -> GradPair:
    """Gradients of a convolution with respect to its input, weight and bias"""
    _check_conv_arguments(input, weight, bias, spec)
    output_size = spec.output_size(*input.shape[2:])
    cols = columns(input, spec)
    value = conv_from_columns(cols, weight, bias, output_size)
    if grad_out.shape != value.shape:
        msg = f"Upstream gradient has shape {grad_out.shape}, expected {value.shape}."
        raise ContextPyramidShapeError(msg)

    n, co = grad_out.shape[:2]
    grad_2d = grad_out.reshape(n, co, output_size[0] * output_size[1])
    weight_2d = weight.reshape(co, -1)
    grad_weight = np.matmul(grad_2d, cols.transpose(0, 2, 1)).sum(axis=0)
    grad_cols = np.matmul(weight_2d.T, grad_2d)
    taps = spec.taps
    grad_input = scatter_windows(
        grad_cols.reshape(n, input.shape[1], taps, *output_size), input.shape, spec
    )
    return GradPair(
        value=value,
        grads={
            "input": grad_input,
            "weight": grad_weight.reshape(weight.shape),
            "bias": grad_out.sum(axis=(0, 2, 3)),
        },
    )


register_op(
    "conv2d",
    forward=conv2d,
    backward=conv2d_backward,
    inputs=("input", "weight", "bias"),
)
