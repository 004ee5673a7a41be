"""Incremental construction of LayerGraphs with static channel tracking"""

from __future__ import annotations

from collections.abc import Sequence

from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.ops.conv_spec import ConvSpec
from context_pyramid.types import OpKind

from .layer_graph import LayerGraph, LayerNode


class GraphBuilder:
    """
    Append nodes in evaluation order, checking channel arithmetic as we go.

    Every method returns the name of the node it added so that calls can be
    chained into larger blocks.
    """

    def __init__(self) -> None:
        self.nodes: list[LayerNode] = []
        # Affinity nodes have a channel count that depends on spatial size
        self.channels: dict[str, int | None] = {}

    def __contains__(self, name: object) -> bool:
        return name in self.channels

    def _append(self, node: LayerNode, channels: int | None) -> str:
        if node.name in self.channels:
            msg = f"Node name '{node.name}' is used more than once."
            raise ContextPyramidShapeError(msg)
        for name in node.inputs:
            if name not in self.channels:
                msg = f"Node '{node.name}' reads '{name}', which has not been added."
                raise ContextPyramidShapeError(msg)
        self.nodes.append(node)
        self.channels[node.name] = channels
        return node.name

    def width(self, name: str) -> int:
        channels = self.channels.get(name)
        if channels is None:
            msg = f"Node '{name}' has no static channel width."
            raise ContextPyramidShapeError(msg)
        return channels

    def input(self, name: str, channels: int) -> str:  # noqa: A003
        return self._append(
            LayerNode(name=name, kind=OpKind.INPUT, out_channels=channels), channels
        )

    def conv(
        self,
        name: str,
        source: str,
        out_channels: int,
        spec: ConvSpec,
        *,
        relu: bool = False,
        deformable: bool = False,
        bias: bool = True,
    ) -> str:
        node = LayerNode(
            name=name,
            kind=OpKind.DEFORM_CONV if deformable else OpKind.CONV,
            inputs=(source,),
            spec=spec,
            in_channels=self.width(source),
            out_channels=out_channels,
            relu=relu,
            bias=bias,
        )
        return self._append(node, out_channels)

    def concat(self, name: str, sources: Sequence[str]) -> str:
        total = sum(self.width(source) for source in sources)
        return self._append(
            LayerNode(name=name, kind=OpKind.CONCAT, inputs=tuple(sources)), total
        )

    def add(self, name: str, sources: Sequence[str]) -> str:
        widths = {self.width(source) for source in sources}
        if len(widths) != 1:
            msg = f"Cannot add nodes {list(sources)} with differing channel widths {sorted(widths)}."
            raise ContextPyramidShapeError(msg)
        return self._append(
            LayerNode(name=name, kind=OpKind.ADD, inputs=tuple(sources)), widths.pop()
        )

    def global_avg_pool(self, name: str, source: str) -> str:
        return self._append(
            LayerNode(name=name, kind=OpKind.GLOBAL_AVG_POOL, inputs=(source,)),
            self.width(source),
        )

    def resize_like(self, name: str, source: str, like: str) -> str:
        """Bilinear resize of `source` to the spatial extent of `like`"""
        node = LayerNode(
            name=name, kind=OpKind.BILINEAR_RESIZE, inputs=(source,), size_of=like
        )
        if like not in self.channels:
            msg = f"Node '{name}' takes its size from '{like}', which has not been added."
            raise ContextPyramidShapeError(msg)
        return self._append(node, self.width(source))

    def max_pool(self, name: str, source: str, spec: ConvSpec) -> str:
        return self._append(
            LayerNode(name=name, kind=OpKind.MAX_POOL, inputs=(source,), spec=spec),
            self.width(source),
        )

    def nearest_upsample(self, name: str, source: str, scale: int = 2) -> str:
        return self._append(
            LayerNode(
                name=name, kind=OpKind.NEAREST_UPSAMPLE, inputs=(source,), scale=scale
            ),
            self.width(source),
        )

    def affinity(self, name: str, query: str, key: str) -> str:
        if self.width(query) != self.width(key):
            msg = f"Query '{query}' and key '{key}' must have the same width."
            raise ContextPyramidShapeError(msg)
        return self._append(
            LayerNode(name=name, kind=OpKind.AFFINITY, inputs=(query, key)), None
        )

    def attn_collapse(self, name: str, source: str) -> str:
        return self._append(
            LayerNode(name=name, kind=OpKind.ATTN_COLLAPSE, inputs=(source,)), 1
        )

    def mul_attention(self, name: str, value: str, attention: str) -> str:
        if self.channels.get(attention) != 1:
            msg = f"Attention node '{attention}' must have a single channel."
            raise ContextPyramidShapeError(msg)
        return self._append(
            LayerNode(name=name, kind=OpKind.MUL_ATTENTION, inputs=(value, attention)),
            self.width(value),
        )

    def build(self, outputs: Sequence[str]) -> LayerGraph:
        return LayerGraph(nodes=tuple(self.nodes), outputs=tuple(outputs))
