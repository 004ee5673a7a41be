"""Validation helpers and value types shared by every tensor op"""

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from context_pyramid.exceptions import ContextPyramidShapeError, ContextPyramidTypeError
from context_pyramid.types import Precision, Tensor


def as_tensor(data: object, precision: Precision = Precision.SINGLE) -> Tensor:
    """Convert array-like data to a contiguous NCHW tensor of the given precision"""
    array = np.ascontiguousarray(data, dtype=precision.dtype)
    return check_tensor(array)


def check_tensor(x: object, name: str = "input") -> Tensor:
    """Ensure that an object is a rank-4 floating point array"""
    if not isinstance(x, np.ndarray):
        msg = f"Expected '{name}' to be a numpy array, got {type(x).__name__}."
        raise ContextPyramidTypeError(msg)
    if x.ndim != 4:
        msg = f"Expected '{name}' to be an NCHW tensor but it has shape {x.shape}."
        raise ContextPyramidShapeError(msg)
    if x.dtype not in (np.float32, np.float64):
        msg = f"Expected '{name}' to have single or double precision, got {x.dtype}."
        raise ContextPyramidTypeError(msg)
    return x


def check_vector(x: object, length: int, name: str = "bias") -> Tensor:
    """Ensure that an object is a floating point vector of the given length"""
    if not isinstance(x, np.ndarray) or x.shape != (length,):
        shape = x.shape if isinstance(x, np.ndarray) else type(x).__name__
        msg = f"Expected '{name}' to have shape ({length},), got {shape}."
        raise ContextPyramidShapeError(msg)
    return x


def check_same_shape(a: Tensor, b: Tensor, names: tuple[str, str]) -> None:
    if a.shape != b.shape:
        msg = f"Shape mismatch between '{names[0]}' {a.shape} and '{names[1]}' {b.shape}."
        raise ContextPyramidShapeError(msg)


@dataclass(frozen=True)
class GradPair:
    """Forward value of an op together with the gradients of each of its inputs"""

    value: Tensor
    grads: dict[str, Tensor] = field(default_factory=dict)

    def check_against(self, inputs: Mapping[str, np.ndarray]) -> None:
        """Ensure every gradient has the shape of the input it belongs to"""
        for name, grad in self.grads.items():
            if name not in inputs:
                msg = f"Gradient returned for unknown input '{name}'."
                raise ContextPyramidShapeError(msg)
            if grad.shape != inputs[name].shape:
                msg = f"Gradient for '{name}' has shape {grad.shape}, expected {inputs[name].shape}."
                raise ContextPyramidShapeError(msg)
