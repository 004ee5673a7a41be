"""Max and global average pooling"""

import numpy as np

from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.types import Tensor

from .conv_spec import ConvSpec
from .registry import register_op
from .tensor import GradPair, check_same_shape, check_tensor
from .windows import gather_windows, scatter_windows


def _pool_spec(
    kernel: tuple[int, int], stride: tuple[int, int], padding: tuple[int, int]
) -> ConvSpec:
    return ConvSpec(kernel=kernel, stride=stride, padding=padding)


def _check_spatial(input: Tensor, op: str) -> None:  # noqa: A002
    check_tensor(input)
    if input.shape[2] * input.shape[3] == 0:
        msg = f"{op} requires a non-empty spatial extent, got shape {input.shape}."
        raise ContextPyramidShapeError(msg)


def max_pool2d(
    input: Tensor,  # noqa: A002
    kernel: tuple[int, int],
    stride: tuple[int, int],
    padding: tuple[int, int] = (0, 0),
) -> Tensor:
    """Windowed maximum; padded positions never win"""
    _check_spatial(input, "Max pooling")
    windows = gather_windows(input, _pool_spec(kernel, stride, padding), -np.inf)
    return windows.max(axis=2)


def max_pool2d_backward(
    input: Tensor,  # noqa: A002
    kernel: tuple[int, int],
    stride: tuple[int, int],
    grad_out: Tensor,
    padding: tuple[int, int] = (0, 0),
) -> GradPair:
    """Route each upstream gradient to the first maximal element of its window"""
    _check_spatial(input, "Max pooling")
    spec = _pool_spec(kernel, stride, padding)
    windows = gather_windows(input, spec, -np.inf)
    value = windows.max(axis=2)
    check_same_shape(grad_out, value, ("grad_out", "output"))
    # argmax returns the first occurrence, in row-major window order
    winners = windows.argmax(axis=2)
    routed = np.zeros_like(windows)
    np.put_along_axis(routed, winners[:, :, np.newaxis], grad_out[:, :, np.newaxis], axis=2)
    return GradPair(
        value=value, grads={"input": scatter_windows(routed, input.shape, spec)}
    )


def global_avg_pool(input: Tensor) -> Tensor:  # noqa: A002
    """Mean over the spatial axes, keeping them as 1x1"""
    _check_spatial(input, "Global average pooling")
    return input.mean(axis=(2, 3), keepdims=True)


def global_avg_pool_backward(input: Tensor, grad_out: Tensor) -> GradPair:  # noqa: A002
    _check_spatial(input, "Global average pooling")
    value = global_avg_pool(input)
    check_same_shape(grad_out, value, ("grad_out", "output"))
    scale = 1.0 / (input.shape[2] * input.shape[3])
    grad_input = np.broadcast_to(grad_out * scale, input.shape).astype(input.dtype)
    return GradPair(value=value, grads={"input": grad_input})


register_op(
    "max_pool2d",
    forward=max_pool2d,
    backward=max_pool2d_backward,
    inputs=("input",),
)
register_op(
    "global_avg_pool",
    forward=global_avg_pool,
    backward=global_avg_pool_backward,
    inputs=("input",),
)
