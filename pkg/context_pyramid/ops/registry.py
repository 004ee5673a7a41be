"""Registry of differentiable ops available to the gradient checker"""

from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from context_pyramid.exceptions import ContextPyramidGradientError
from context_pyramid.types import Tensor

from .tensor import GradPair

ForwardFn = Callable[..., Tensor]
BackwardFn = Callable[..., GradPair]


@dataclass(frozen=True)
class DifferentiableOp:
    """
    A forward function with its explicit backward.

    `inputs` names the differentiable keyword arguments of both functions; every
    other keyword argument (window geometry, sizes) is passed through unchanged.
    """

    name: str
    forward: ForwardFn
    backward: BackwardFn | None
    inputs: tuple[str, ...]

    def __call__(self, **kwargs: Any) -> Tensor:
        return self.forward(**kwargs)


OP_REGISTRY: dict[str, DifferentiableOp] = {}


def register_op(
    name: str,
    *,
    forward: ForwardFn,
    backward: BackwardFn | None,
    inputs: tuple[str, ...],
) -> DifferentiableOp:
    op = DifferentiableOp(name=name, forward=forward, backward=backward, inputs=inputs)
    OP_REGISTRY[name] = op
    return op


def lookup_op(name: str) -> DifferentiableOp:
    try:
        op = OP_REGISTRY[name]
    except KeyError as exc:
        msg = f"No op named '{name}' is registered."
        raise ContextPyramidGradientError(msg) from exc
    if op.backward is None:
        msg = f"Op '{name}' has no registered backward pass."
        raise ContextPyramidGradientError(msg)
    return op
