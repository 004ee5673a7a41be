"""Spatial self-affinity and its collapse into a single attention map"""

import numpy as np

from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.types import Tensor

from .elementwise import sigmoid
from .registry import register_op
from .tensor import GradPair, check_same_shape, check_tensor


def affinity_matrix(q: Tensor, k: Tensor) -> Tensor:
    """
    Dot products between every query position and every key position.

    With positions flattened row-major to N = h * w, result[n, i, y, x] is the
    dot product over channels of q at position i and k at position (y, x).
    """
    check_tensor(q, "q")
    check_tensor(k, "k")
    check_same_shape(q, k, ("q", "k"))
    n, c, h, w = q.shape
    queries = q.reshape(n, c, h * w)
    keys = k.reshape(n, c, h * w)
    return np.matmul(queries.transpose(0, 2, 1), keys).reshape(n, h * w, h, w)


def affinity_matrix_backward(q: Tensor, k: Tensor, grad_out: Tensor) -> GradPair:
    value = affinity_matrix(q, k)
    check_same_shape(grad_out, value, ("grad_out", "output"))
    n, c, h, w = q.shape
    queries = q.reshape(n, c, h * w)
    keys = k.reshape(n, c, h * w)
    grad_r = grad_out.reshape(n, h * w, h * w)
    grad_q = np.matmul(keys, grad_r.transpose(0, 2, 1))
    grad_k = np.matmul(queries, grad_r)
    return GradPair(
        value=value,
        grads={"q": grad_q.reshape(q.shape), "k": grad_k.reshape(k.shape)},
    )


def _open_interval(dtype: np.dtype) -> tuple[np.floating, np.floating]:
    """Smallest and largest representable values strictly inside (0, 1)"""
    return np.finfo(dtype).tiny, np.nextafter(dtype.type(1), dtype.type(0))


def attn_collapse(r: Tensor) -> Tensor:
    """
    Sigmoid every affinity, then average over the query axis.

    The mean is clamped into the open interval (0, 1), where it would otherwise
    round to exactly 0 or 1 for saturated affinities.
    """
    check_tensor(r, "r")
    if r.shape[1] < 1:
        msg = f"Cannot collapse an affinity tensor with no query positions, shape {r.shape}."
        raise ContextPyramidShapeError(msg)
    low, high = _open_interval(r.dtype)
    return np.clip(sigmoid(r).mean(axis=1, keepdims=True), low, high).astype(r.dtype)


def attn_collapse_backward(r: Tensor, grad_out: Tensor) -> GradPair:
    value = attn_collapse(r)
    check_same_shape(grad_out, value, ("grad_out", "output"))
    activated = sigmoid(r)
    # clamped positions are flat
    low, high = _open_interval(r.dtype)
    mean = activated.mean(axis=1, keepdims=True)
    grad_out = np.where((mean >= low) & (mean <= high), grad_out, 0.0)
    grad_r = grad_out * activated * (1.0 - activated) / r.shape[1]
    return GradPair(value=value, grads={"r": grad_r.astype(r.dtype)})


register_op(
    "affinity_matrix",
    forward=affinity_matrix,
    backward=affinity_matrix_backward,
    inputs=("q", "k"),
)
register_op(
    "attn_collapse",
    forward=attn_collapse,
    backward=attn_collapse_backward,
    inputs=("r",),
)
