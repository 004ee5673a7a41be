"""The gradient-check suite run by `acfpn gradcheck`"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from context_pyramid.attention import cnam_build, cxam_build
from context_pyramid.config import GradcheckConfig, NetworkConfig
from context_pyramid.exceptions import ContextPyramidError
from context_pyramid.graph import (
    GraphWeights,
    LayerGraph,
    graph_grad_check,
    init_parameters,
    node_rng,
)
from context_pyramid.logging import get_logger
from context_pyramid.ops.conv_spec import ConvSpec
from context_pyramid.ops.gradcheck import grad_check
from context_pyramid.pyramid import acfpn_build, pyramid_grad_check
from context_pyramid.types import OpKind, Precision, Tensor

# Divisor applied to every channel width of the end-to-end network
TINY_NETWORK_DIVISOR = 16
TINY_IMAGE_SHAPE = (1, 3, 32, 32)


@dataclass(frozen=True)
class GradcheckCase:
    """One finite-difference comparison and the tolerance it must meet"""

    name: str
    run: Callable[[], float]
    loose: bool = False


@dataclass(frozen=True)
class GradcheckResult:
    name: str
    error: float
    tolerance: float
    message: str | None = None

    @property
    def passed(self) -> bool:
        return self.message is None and bool(self.error <= self.tolerance)


@dataclass
class CaseFactory:
    """Seeded random tensors for the cases of one suite"""

    seed: int
    cases: list[GradcheckCase] = field(default_factory=list)

    def normal(self, name: str, *shape: int, scale: float = 1.0) -> Tensor:
        return scale * node_rng(self.seed, name).standard_normal(shape)

    def uniform(self, name: str, low: float, high: float, *shape: int) -> Tensor:
        return node_rng(self.seed, name).uniform(low, high, size=shape)

    def op(
        self,
        name: str,
        op: str,
        inputs: dict[str, Tensor],
        epsilon: float,
        *,
        options: dict[str, Any] | None = None,
        loose: bool = False,
    ) -> None:
        self.cases.append(
            GradcheckCase(
                name=name,
                run=lambda: grad_check(op, inputs, epsilon, options=options),
                loose=loose,
            )
        )


def nudge_offsets(graph: LayerGraph, weights: GraphWeights, seed: int) -> None:
    """Move deformable sampling points off the integer grid, where the kernel has kinks"""
    for node in graph.parameter_nodes:
        if node.kind == OpKind.DEFORM_CONV:
            params = weights[node.name]
            rng = node_rng(seed, f"{node.name}.offset_bias")
            params["offset_bias"] = rng.uniform(
                0.2, 0.4, size=params["offset_bias"].shape
            ).astype(params["offset_bias"].dtype)


def build_suite(config: GradcheckConfig, seed: int) -> list[GradcheckCase]:
    """Every op, the attention paths and a tiny end-to-end network"""
    eps = config.epsilon
    factory = CaseFactory(seed)

    conv_specs = {
        "conv2d": ConvSpec.square(3, padding=1),
        "conv2d_dilated": ConvSpec.square(3, padding=2, dilation=2),
        "conv2d_strided": ConvSpec(kernel=(2, 3), stride=(2, 1), padding=(1, 0)),
    }
    for name, spec in conv_specs.items():
        co, ci = 2, 3
        factory.op(
            name,
            "conv2d",
            {
                "input": factory.normal(f"{name}.input", 1, ci, 6, 6),
                "weight": factory.normal(f"{name}.weight", co, ci, *spec.kernel),
                "bias": factory.normal(f"{name}.bias", co),
            },
            eps,
            options={"spec": spec},
        )
    factory.op(
        "max_pool2d",
        "max_pool2d",
        {"input": factory.normal("max_pool2d", 1, 3, 8, 8)},
        eps,
        options={"kernel": (2, 2), "stride": (2, 2)},
    )
    factory.op(
        "global_avg_pool",
        "global_avg_pool",
        {"input": factory.normal("global_avg_pool", 1, 3, 4, 4)},
        eps,
    )
    factory.op(
        "bilinear_resize",
        "bilinear_resize",
        {"input": factory.normal("bilinear_resize", 1, 2, 3, 4)},
        eps,
        options={"out_h": 7, "out_w": 5},
    )
    factory.op(
        "nearest_upsample",
        "nearest_upsample",
        {"input": factory.normal("nearest_upsample", 1, 2, 3, 3)},
        eps,
    )
    factory.op(
        "concat_channels",
        "concat_channels",
        {
            "input_0": factory.normal("concat.0", 1, 2, 3, 3),
            "input_1": factory.normal("concat.1", 1, 3, 3, 3),
        },
        eps,
    )
    factory.op(
        "sigmoid", "sigmoid", {"input": factory.normal("sigmoid", 1, 3, 4, 4)}, eps
    )
    # magnitudes stay well clear of the kink at zero
    relu_input = factory.uniform("relu.magnitude", 0.1, 1.0, 1, 3, 4, 4) * np.sign(
        factory.normal("relu.sign", 1, 3, 4, 4)
    )
    factory.op("relu", "relu", {"input": relu_input}, eps)
    factory.op(
        "add",
        "add",
        {"a": factory.normal("add.a", 1, 2, 3, 3), "b": factory.normal("add.b", 1, 2, 3, 3)},
        eps,
    )
    factory.op(
        "mul_attention",
        "mul_attention",
        {
            "v": factory.normal("mul_attention.v", 1, 3, 4, 4),
            "attn": factory.uniform("mul_attention.attn", 0.0, 1.0, 1, 1, 4, 4),
        },
        eps,
    )
    factory.op(
        "affinity_matrix",
        "affinity_matrix",
        {
            "q": factory.normal("affinity.q", 1, 4, 2, 3),
            "k": factory.normal("affinity.k", 1, 4, 2, 3),
        },
        eps,
    )
    factory.op(
        "attn_collapse",
        "attn_collapse",
        {"r": factory.normal("attn_collapse", 1, 6, 2, 3)},
        eps,
    )

    deform_spec = ConvSpec.square(3, padding=2, dilation=2)
    factory.op(
        "deform_conv2d",
        "deform_conv2d",
        {
            "input": factory.normal("deform.input", 1, 2, 6, 6),
            "weight": factory.normal("deform.weight", 2, 2, 3, 3),
            "bias": factory.normal("deform.bias", 2),
            "offset_weight": factory.normal("deform.offset_weight", 18, 2, 3, 3, scale=0.005),
            "offset_bias": factory.uniform("deform.offset_bias", 0.2, 0.4, 18),
        },
        eps,
        options={"spec": deform_spec},
        loose=True,
    )

    cxam = cxam_build(in_channels=6, query_channels=4)
    factory.cases.append(
        GradcheckCase(
            name="cxam_path",
            run=lambda: graph_grad_check(
                cxam,
                init_parameters(cxam, seed, Precision.DOUBLE),
                {"feature": factory.normal("cxam.feature", 1, 6, 3, 3)},
                eps,
            ),
        )
    )
    cnam = cnam_build(f5_channels=8, value_channels=6, query_channels=4)
    factory.cases.append(
        GradcheckCase(
            name="cnam_path",
            run=lambda: graph_grad_check(
                cnam,
                init_parameters(cnam, seed, Precision.DOUBLE),
                {
                    "f5": factory.normal("cnam.f5", 1, 8, 3, 3),
                    "cxam_value": factory.normal("cnam.value", 1, 6, 3, 3),
                },
                eps,
            ),
        )
    )
    factory.cases.append(
        GradcheckCase(
            name="end_to_end",
            run=lambda: tiny_network_error(
                seed, eps, max_samples=config.max_samples
            ),
            loose=True,
        )
    )
    return factory.cases


def tiny_network_error(
    seed: int, epsilon: float, *, max_samples: int | None
) -> float:
    """Finite-difference error of the full network with every width divided by 16"""
    network = NetworkConfig().scaled(TINY_NETWORK_DIVISOR)
    graph = acfpn_build(network)
    weights = init_parameters(graph, seed, Precision.DOUBLE)
    nudge_offsets(graph, weights, seed)
    image = node_rng(seed, "end_to_end.image").standard_normal(TINY_IMAGE_SHAPE)
    return pyramid_grad_check(
        image, weights, network, epsilon, max_samples=max_samples, seed=seed
    )


def run_suite(
    config: GradcheckConfig, seed: int, cases: list[GradcheckCase] | None = None
) -> list[GradcheckResult]:
    """
    Run every case, recording failures rather than stopping at the first.

    An exception raised inside a case fails that case with its message.
    """
    logger = get_logger()
    results = []
    for case in cases if cases is not None else build_suite(config, seed):
        tolerance = config.loose_tolerance if case.loose else config.tolerance
        logger.debug(f"Checking gradients of '{case.name}'.")
        try:
            error = float(case.run())
            message = None if np.isfinite(error) else "non-finite error"
        except ContextPyramidError as exc:
            error, message = float("inf"), str(exc)
        results.append(
            GradcheckResult(
                name=case.name, error=error, tolerance=tolerance, message=message
            )
        )
    return results
