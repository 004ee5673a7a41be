"""Projection kernels of the context and content attention modules"""

from __future__ import annotations

from dataclasses import dataclass

from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.graph import GraphWeights
from context_pyramid.ops.tensor import check_tensor, check_vector
from context_pyramid.types import Tensor


def _check_projection(weight: Tensor, bias: Tensor, name: str) -> None:
    check_tensor(weight, name)
    if weight.shape[2:] != (1, 1):
        msg = f"Projection '{name}' must be a 1x1 kernel, got shape {weight.shape}."
        raise ContextPyramidShapeError(msg)
    check_vector(bias, weight.shape[0], f"{name} bias")


@dataclass(frozen=True)
class CxamWeights:
    """Query, key and value projections applied to the context feature"""

    wq: Tensor
    bq: Tensor
    wk: Tensor
    bk: Tensor
    wv: Tensor
    bv: Tensor

    def __post_init__(self) -> None:
        _check_projection(self.wq, self.bq, "wq")
        _check_projection(self.wk, self.bk, "wk")
        _check_projection(self.wv, self.bv, "wv")
        if self.wq.shape != self.wk.shape:
            msg = f"Query {self.wq.shape} and key {self.wk.shape} projections must match."
            raise ContextPyramidShapeError(msg)
        if self.wq.shape[1] != self.wv.shape[1]:
            msg = "Query and value projections must read the same number of channels."
            raise ContextPyramidShapeError(msg)

    @property
    def in_channels(self) -> int:
        return int(self.wq.shape[1])

    @classmethod
    def from_graph_weights(cls, weights: GraphWeights) -> CxamWeights:
        return cls(
            wq=weights["cxam_query"]["weight"],
            bq=weights["cxam_query"]["bias"],
            wk=weights["cxam_key"]["weight"],
            bk=weights["cxam_key"]["bias"],
            wv=weights["cxam_value"]["weight"],
            bv=weights["cxam_value"]["bias"],
        )

    def to_graph_weights(self) -> GraphWeights:
        return {
            "cxam_query": {"weight": self.wq, "bias": self.bq},
            "cxam_key": {"weight": self.wk, "bias": self.bk},
            "cxam_value": {"weight": self.wv, "bias": self.bv},
        }


@dataclass(frozen=True)
class CnamWeights:
    """Position projections applied to the raw backbone feature"""

    wp: Tensor
    bp: Tensor
    wz: Tensor
    bz: Tensor

    def __post_init__(self) -> None:
        _check_projection(self.wp, self.bp, "wp")
        _check_projection(self.wz, self.bz, "wz")
        if self.wp.shape != self.wz.shape:
            msg = f"Projections wp {self.wp.shape} and wz {self.wz.shape} must match."
            raise ContextPyramidShapeError(msg)

    @property
    def in_channels(self) -> int:
        return int(self.wp.shape[1])

    @classmethod
    def from_graph_weights(cls, weights: GraphWeights) -> CnamWeights:
        return cls(
            wp=weights["cnam_query"]["weight"],
            bp=weights["cnam_query"]["bias"],
            wz=weights["cnam_key"]["weight"],
            bz=weights["cnam_key"]["bias"],
        )

    def to_graph_weights(self) -> GraphWeights:
        return {
            "cnam_query": {"weight": self.wp, "bias": self.bp},
            "cnam_key": {"weight": self.wz, "bias": self.bz},
        }
