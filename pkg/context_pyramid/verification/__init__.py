"""Finite-difference verification of every backward pass"""

from .suite import (
    TINY_IMAGE_SHAPE,
    TINY_NETWORK_DIVISOR,
    GradcheckCase,
    GradcheckResult,
    build_suite,
    nudge_offsets,
    run_suite,
    tiny_network_error,
)

__all__ = [
    "TINY_IMAGE_SHAPE",
    "TINY_NETWORK_DIVISOR",
    "GradcheckCase",
    "GradcheckResult",
    "build_suite",
    "nudge_offsets",
    "run_suite",
    "tiny_network_error",
]
