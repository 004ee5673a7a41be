"""Central finite-difference verification of analytic backward passes"""

from collections.abc import Callable, Mapping
from typing import Any

import numpy as np

from context_pyramid.exceptions import (
    ContextPyramidGradientError,
    ContextPyramidValueError,
)
from context_pyramid.logging import get_logger
from context_pyramid.types import Tensor
from context_pyramid.validators import epsilon as validate_epsilon

from .registry import DifferentiableOp, lookup_op
from .tensor import GradPair

LossFn = Callable[[Mapping[str, np.ndarray]], float]
GradientFn = Callable[[Mapping[str, np.ndarray]], Mapping[str, np.ndarray]]

DENOMINATOR_FLOOR = 1e-8


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """Largest elementwise |a - b| / max(|a|, |b|, 1e-8)"""
    if analytic.size == 0:
        return 0.0
    denominator = np.maximum(
        np.maximum(np.abs(analytic), np.abs(numeric)), DENOMINATOR_FLOOR
    )
    return float(np.max(np.abs(analytic - numeric) / denominator))


def _sample_indices(
    size: int, max_samples: int | None, rng: np.random.Generator
) -> np.ndarray:
    if max_samples is None or size <= max_samples:
        return np.arange(size)
    return np.sort(rng.choice(size, size=max_samples, replace=False))


def check_gradients(
    loss: LossFn,
    gradients: GradientFn,
    inputs: Mapping[str, np.ndarray],
    epsilon: float = 1e-6,
    *,
    max_samples: int | None = None,
    seed: int = 0,
) -> dict[str, float]:
    """
    Compare analytic gradients of a scalar loss with central differences.

    Every scalar of every input is perturbed by +/- epsilon unless `max_samples`
    caps the number of coordinates checked per input, in which case a seeded
    random subset is used.

    Returns:
        the maximum relative error for each input
    """
    validate_input_precision(inputs)
    try:
        validate_epsilon(epsilon)
    except ValueError as exc:
        raise ContextPyramidValueError(str(exc)) from exc

    logger = get_logger()
    rng = np.random.default_rng(seed)
    perturbed = {name: np.array(value, copy=True) for name, value in inputs.items()}
    analytic_grads = gradients(perturbed)

    errors: dict[str, float] = {}
    for name, value in perturbed.items():
        if name not in analytic_grads:
            continue
        flat = value.reshape(-1)
        analytic_flat = np.array(analytic_grads[name], copy=True).reshape(-1)
        indices = _sample_indices(flat.size, max_samples, rng)
        numeric = np.empty(indices.size, dtype=np.float64)
        for position, index in enumerate(indices):
            original = flat[index]
            flat[index] = original + epsilon
            loss_plus = loss(perturbed)
            flat[index] = original - epsilon
            loss_minus = loss(perturbed)
            flat[index] = original
            numeric[position] = (loss_plus - loss_minus) / (2.0 * epsilon)
        errors[name] = relative_error(analytic_flat[indices], numeric)
        logger.debug(
            f"Gradient of '{name}': {indices.size} coordinates, max relative error {errors[name]:.3e}."
        )
    return errors


def validate_input_precision(inputs: Mapping[str, np.ndarray]) -> None:
    for name, value in inputs.items():
        if np.asarray(value).dtype != np.float64:
            msg = f"Gradient checks require double precision but '{name}' is {np.asarray(value).dtype}."
            raise ContextPyramidValueError(msg)


def grad_check(
    op: str | DifferentiableOp,
    inputs: Mapping[str, Tensor],
    epsilon: float = 1e-6,
    *,
    options: Mapping[str, Any] | None = None,
    max_samples: int | None = None,
    seed: int = 0,
) -> float:
    """
    Maximum relative error between an op's analytic backward and finite differences.

    The loss is the plain sum of the op's outputs, so the upstream gradient is a
    tensor of ones.

    Raises:
        ContextPyramidGradientError: if the op is unknown or has no backward
        ContextPyramidValueError: if inputs are not double precision or epsilon is out of range
    """
    differentiable = lookup_op(op) if isinstance(op, str) else op
    backward = differentiable.backward
    if backward is None:
        msg = f"Op '{differentiable.name}' has no registered backward pass."
        raise ContextPyramidGradientError(msg)
    extra = dict(options or {})

    def loss(values: Mapping[str, np.ndarray]) -> float:
        return float(differentiable.forward(**values, **extra).sum())

    def gradients(values: Mapping[str, np.ndarray]) -> Mapping[str, np.ndarray]:
        value = differentiable.forward(**values, **extra)
        result: GradPair = backward(**values, **extra, grad_out=np.ones_like(value))
        result.check_against(values)
        return result.grads

    errors = check_gradients(
        loss, gradients, inputs, epsilon, max_samples=max_samples, seed=seed
    )
    worst = max(errors.values(), default=0.0)
    get_logger().debug(f"Gradient check of '{differentiable.name}': {worst:.3e}.")
    return worst
