"""Receptive-field arithmetic over chains of windows and over whole graphs"""

from __future__ import annotations

from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict

from context_pyramid.exceptions import ContextPyramidValueError
from context_pyramid.graph import LayerGraph
from context_pyramid.ops.conv_spec import ConvSpec
from context_pyramid.types import OpKind

# Nodes whose output depends on every input position
_GLOBAL_KINDS = (OpKind.GLOBAL_AVG_POOL, OpKind.AFFINITY)


class RfSpec(BaseModel):
    """
    Receptive field of one activation, in input pixels.

    `jump` is the distance in input pixels between neighbouring activations and
    `start` is the centre of the first activation's field.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    rf: tuple[int, int] = (1, 1)
    jump: tuple[int, int] = (1, 1)
    start: tuple[float, float] = (0.5, 0.5)
    is_global: bool = False

    def then(self, spec: ConvSpec) -> RfSpec:
        """The field after applying one more window"""
        rf, jump, start = [], [], []
        for axis in range(2):
            k, s = spec.kernel[axis], spec.stride[axis]
            p, d = spec.padding[axis], spec.dilation[axis]
            rf.append(self.rf[axis] + (k - 1) * d * self.jump[axis])
            start.append(self.start[axis] + ((k - 1) * d / 2 - p) * self.jump[axis])
            jump.append(self.jump[axis] * s)
        return RfSpec(
            rf=(rf[0], rf[1]),
            jump=(jump[0], jump[1]),
            start=(start[0], start[1]),
            is_global=self.is_global,
        )


def receptive_field(chain: Sequence[ConvSpec], initial: RfSpec | None = None) -> RfSpec:
    """
    Fold the receptive-field recurrence over a chain of convolution or pooling windows.

    Raises:
        ContextPyramidValueError: if the chain is empty
    """
    if not chain:
        msg = "Cannot compute the receptive field of an empty chain."
        raise ContextPyramidValueError(msg)
    field = initial or RfSpec()
    for spec in chain:
        field = field.then(spec)
    return field


def _merge(fields: Sequence[RfSpec]) -> RfSpec:
    """Field of a node combining several inputs: the widest field wins"""
    widest = max(fields, key=lambda field: (field.rf[0] * field.rf[1], field.rf))
    return widest.model_copy(
        update={"is_global": any(field.is_global for field in fields)}
    )


def graph_receptive_fields(
    graph: LayerGraph, initial: RfSpec | None = None
) -> dict[str, RfSpec]:
    """
    Receptive field of every node with respect to the graph inputs.

    Global pooling and affinity nodes, and everything downstream of them, are
    marked global.
    """
    fields: dict[str, RfSpec] = {}
    for node in graph:
        if node.kind == OpKind.INPUT:
            fields[node.name] = initial or RfSpec()
            continue
        field = _merge([fields[name] for name in node.inputs])
        if node.kind in (OpKind.CONV, OpKind.DEFORM_CONV, OpKind.MAX_POOL) and node.spec:
            field = field.then(node.spec)
        elif node.kind == OpKind.NEAREST_UPSAMPLE:
            field = field.model_copy(
                update={
                    "jump": (
                        max(1, field.jump[0] // node.scale),
                        max(1, field.jump[1] // node.scale),
                    )
                }
            )
        if node.kind in _GLOBAL_KINDS:
            field = field.model_copy(update={"is_global": True})
        fields[node.name] = field
    return fields


def cem_path_chain(rates: Sequence[int]) -> list[ConvSpec]:
    """Windows met by the deepest path of a dense CEM: each 1x1 then dilated 3x3"""
    chain: list[ConvSpec] = []
    for rate in rates:
        chain.append(ConvSpec.square(1))
        chain.append(ConvSpec.square(3, padding=rate, dilation=rate))
    return chain


def cem_rf_growth(rates: Sequence[int], jump: int = 32, *, dense: bool = True) -> int:
    """
    Pixels that the CEM paths add to the receptive field of F5.

    With dense connections the paths are chained, so their growths add up;
    without them the widest single path determines the growth.
    """
    entering = RfSpec(rf=(1, 1), jump=(jump, jump))
    if dense:
        chains = [cem_path_chain(rates)]
    else:
        chains = [cem_path_chain([rate]) for rate in rates]
    return max(receptive_field(chain, entering).rf[0] for chain in chains) - 1
