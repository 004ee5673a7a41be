"""Elementwise activations, sums and attention broadcasting"""

from collections.abc import Sequence

import numpy as np

from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.types import Tensor

from .registry import register_op
from .tensor import GradPair, check_same_shape, check_tensor


def sigmoid(input: Tensor) -> Tensor:  # noqa: A002
    # exp of a non-positive argument never overflows
    decay = np.exp(-np.abs(input))
    return np.where(input >= 0, 1.0 / (1.0 + decay), decay / (1.0 + decay)).astype(
        input.dtype
    )


def sigmoid_backward(input: Tensor, grad_out: Tensor) -> GradPair:  # noqa: A002
    value = sigmoid(input)
    check_same_shape(grad_out, value, ("grad_out", "output"))
    return GradPair(value=value, grads={"input": grad_out * value * (1.0 - value)})


def relu(input: Tensor) -> Tensor:  # noqa: A002
    return np.maximum(input, 0).astype(input.dtype)


def relu_backward(input: Tensor, grad_out: Tensor) -> GradPair:  # noqa: A002
    value = relu(input)
    check_same_shape(grad_out, value, ("grad_out", "output"))
    grad_input = np.where(input > 0, grad_out, 0.0).astype(input.dtype)
    return GradPair(value=value, grads={"input": grad_input})


def add(a: Tensor, b: Tensor) -> Tensor:
    check_tensor(a, "a")
    check_tensor(b, "b")
    check_same_shape(a, b, ("a", "b"))
    return a + b


def add_backward(a: Tensor, b: Tensor, grad_out: Tensor) -> GradPair:
    value = add(a, b)
    check_same_shape(grad_out, value, ("grad_out", "output"))
    return GradPair(value=value, grads={"a": grad_out.copy(), "b": grad_out.copy()})


def _check_attention(v: Tensor, attn: Tensor) -> None:
    check_tensor(v, "v")
    check_tensor(attn, "attn")
    n, _, h, w = v.shape
    if attn.shape != (n, 1, h, w):
        msg = f"Attention map of shape {attn.shape} cannot be broadcast over features of shape {v.shape}."
        raise ContextPyramidShapeError(msg)


def mul_attention(v: Tensor, attn: Tensor) -> Tensor:
    """Multiply every channel of `v` by a single-channel attention map"""
    _check_attention(v, attn)
    return v * attn


def mul_attention_backward(v: Tensor, attn: Tensor, grad_out: Tensor) -> GradPair:
    value = mul_attention(v, attn)
    check_same_shape(grad_out, value, ("grad_out", "output"))
    return GradPair(
        value=value,
        grads={
            "v": grad_out * attn,
            "attn": (grad_out * v).sum(axis=1, keepdims=True),
        },
    )


def concat_channels(inputs: Sequence[Tensor]) -> Tensor:
    """Stack tensors along the channel axis, preserving their order"""
    if not inputs:
        msg = "Cannot concatenate an empty list of tensors."
        raise ContextPyramidShapeError(msg)
    for idx, tensor in enumerate(inputs):
        check_tensor(tensor, f"input_{idx}")
    n, _, h, w = inputs[0].shape
    for idx, tensor in enumerate(inputs[1:], start=1):
        if (tensor.shape[0], *tensor.shape[2:]) != (n, h, w):
            msg = f"Cannot concatenate 'input_{idx}' of shape {tensor.shape} with tensors of batch and spatial size {(n, h, w)}."
            raise ContextPyramidShapeError(msg)
    return np.concatenate(inputs, axis=1)


def concat_channels_backward(inputs: Sequence[Tensor], grad_out: Tensor) -> GradPair:
    """Slice the upstream gradient back into per-input channel blocks"""
    value = concat_channels(inputs)
    check_same_shape(grad_out, value, ("grad_out", "output"))
    boundaries = np.cumsum([tensor.shape[1] for tensor in inputs])[:-1]
    blocks = np.split(grad_out, boundaries, axis=1)
    return GradPair(
        value=value,
        grads={f"input_{idx}": block.copy() for idx, block in enumerate(blocks)},
    )


def _concat_pair(input_0: Tensor, input_1: Tensor) -> Tensor:
    return concat_channels([input_0, input_1])


def _concat_pair_backward(input_0: Tensor, input_1: Tensor, grad_out: Tensor) -> GradPair:
    return concat_channels_backward([input_0, input_1], grad_out)


register_op("sigmoid", forward=sigmoid, backward=sigmoid_backward, inputs=("input",))
register_op("relu", forward=relu, backward=relu_backward, inputs=("input",))
register_op("add", forward=add, backward=add_backward, inputs=("a", "b"))
register_op(
    "mul_attention",
    forward=mul_attention,
    backward=mul_attention_backward,
    inputs=("v", "attn"),
)
register_op(
    "concat_channels",
    forward=_concat_pair,
    backward=_concat_pair_backward,
    inputs=("input_0", "input_1"),
)
