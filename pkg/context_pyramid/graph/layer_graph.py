"""Declarative description of a computation DAG"""

from __future__ import annotations

from collections.abc import Iterator

from pydantic import BaseModel, ConfigDict, model_validator

from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.ops.conv_spec import ConvSpec
from context_pyramid.types import OpKind

# Number of inputs each kind of node accepts, as (minimum, maximum)
_ARITY: dict[OpKind, tuple[int, int | None]] = {
    OpKind.ADD: (1, None),
    OpKind.AFFINITY: (2, 2),
    OpKind.ATTN_COLLAPSE: (1, 1),
    OpKind.BILINEAR_RESIZE: (1, 1),
    OpKind.CONCAT: (1, None),
    OpKind.CONV: (1, 1),
    OpKind.DEFORM_CONV: (1, 1),
    OpKind.GLOBAL_AVG_POOL: (1, 1),
    OpKind.INPUT: (0, 0),
    OpKind.MAX_POOL: (1, 1),
    OpKind.MUL_ATTENTION: (2, 2),
    OpKind.NEAREST_UPSAMPLE: (1, 1),
}

_WINDOWED = (OpKind.CONV, OpKind.DEFORM_CONV, OpKind.MAX_POOL)
_PARAMETRISED = (OpKind.CONV, OpKind.DEFORM_CONV)


class LayerNode(BaseModel):
    """
    One operation of a LayerGraph.

    Convolutions carry their channel widths so that weight shapes are known
    without running anything; a bilinear resize takes its target extent from the
    node named in `size_of`.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    kind: OpKind
    inputs: tuple[str, ...] = ()
    spec: ConvSpec | None = None
    in_channels: int | None = None
    out_channels: int | None = None
    relu: bool = False
    bias: bool = True
    scale: int = 2
    size_of: str | None = None

    @model_validator(mode="after")
    def check_fields(self) -> LayerNode:
        minimum, maximum = _ARITY[self.kind]
        if len(self.inputs) < minimum or (
            maximum is not None and len(self.inputs) > maximum
        ):
            msg = f"Node '{self.name}' of kind '{self.kind.value}' cannot take {len(self.inputs)} inputs."
            raise ValueError(msg)
        if self.kind in _WINDOWED and self.spec is None:
            msg = f"Node '{self.name}' of kind '{self.kind.value}' needs a window spec."
            raise ValueError(msg)
        if self.kind in _PARAMETRISED and (
            self.in_channels is None or self.out_channels is None
        ):
            msg = f"Convolution node '{self.name}' needs input and output widths."
            raise ValueError(msg)
        if self.kind == OpKind.INPUT and self.out_channels is None:
            msg = f"Input node '{self.name}' needs a channel width."
            raise ValueError(msg)
        if self.kind == OpKind.BILINEAR_RESIZE and self.size_of is None:
            msg = f"Resize node '{self.name}' needs a node to take its size from."
            raise ValueError(msg)
        return self

    @property
    def has_parameters(self) -> bool:
        return self.kind in _PARAMETRISED

    def parameter_shapes(self) -> dict[str, tuple[int, ...]]:
        """Shapes of the trainable tensors belonging to this node"""
        if not self.has_parameters or self.spec is None:
            return {}
        co, ci = self.out_channels or 0, self.in_channels or 0
        kh, kw = self.spec.kernel
        shapes: dict[str, tuple[int, ...]] = {"weight": (co, ci, kh, kw)}
        if self.bias:
            shapes["bias"] = (co,)
        if self.kind == OpKind.DEFORM_CONV:
            shapes["offset_weight"] = (2 * kh * kw, ci, kh, kw)
            shapes["offset_bias"] = (2 * kh * kw,)
        return shapes


class LayerGraph(BaseModel):
    """
    An ordered, acyclic list of nodes together with the names of its outputs.

    Nodes may only consume nodes listed before them, so list order is a valid
    evaluation order.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    nodes: tuple[LayerNode, ...]
    outputs: tuple[str, ...]

    @model_validator(mode="after")
    def check_topology(self) -> LayerGraph:
        seen: set[str] = set()
        for node in self.nodes:
            if node.name in seen:
                msg = f"Node name '{node.name}' is used more than once."
                raise ValueError(msg)
            for name in (*node.inputs, *([node.size_of] if node.size_of else [])):
                if name not in seen:
                    msg = f"Node '{node.name}' reads '{name}', which is not defined before it."
                    raise ValueError(msg)
            seen.add(node.name)
        for name in self.outputs:
            if name not in seen:
                msg = f"Output '{name}' is not a node of this graph."
                raise ValueError(msg)
        return self

    def __iter__(self) -> Iterator[LayerNode]:  # type: ignore[override]
        return iter(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, name: object) -> bool:
        return any(node.name == name for node in self.nodes)

    def node(self, name: str) -> LayerNode:
        for node in self.nodes:
            if node.name == name:
                return node
        msg = f"Graph has no node named '{name}'."
        raise ContextPyramidShapeError(msg)

    @property
    def input_nodes(self) -> list[LayerNode]:
        return [node for node in self.nodes if node.kind == OpKind.INPUT]

    @property
    def parameter_nodes(self) -> list[LayerNode]:
        return [node for node in self.nodes if node.has_parameters]
