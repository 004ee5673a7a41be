"""Static shape inference over a LayerGraph"""

from collections.abc import Mapping

from context_pyramid.exceptions import ContextPyramidShapeError
from context_pyramid.types import OpKind, Shape4

from .layer_graph import LayerGraph, LayerNode


def _same(node: LayerNode, shapes: list[Shape4]) -> Shape4:
    if len(set(shapes)) != 1:
        msg = f"Inputs to '{node.name}' have differing shapes {shapes}."
        raise ContextPyramidShapeError(msg)
    return shapes[0]


def node_shape(
    node: LayerNode, inputs: list[Shape4], size_of: Shape4 | None = None
) -> Shape4:
    """Output shape of a single node given the shapes of its inputs"""
    if node.kind in (OpKind.CONV, OpKind.DEFORM_CONV) and node.spec:
        n, c, h, w = inputs[0]
        if c != node.in_channels:
            msg = f"Node '{node.name}' expects {node.in_channels} input channels, got {c}."
            raise ContextPyramidShapeError(msg)
        return (n, node.out_channels or 0, *node.spec.output_size(h, w))
    if node.kind == OpKind.MAX_POOL and node.spec:
        n, c, h, w = inputs[0]
        return (n, c, *node.spec.output_size(h, w))
    if node.kind == OpKind.CONCAT:
        spatial = {(n, h, w) for n, _, h, w in inputs}
        if len(spatial) != 1:
            msg = f"Inputs to '{node.name}' disagree on batch or spatial size: {inputs}."
            raise ContextPyramidShapeError(msg)
        n, _, h, w = inputs[0]
        return (n, sum(shape[1] for shape in inputs), h, w)
    if node.kind == OpKind.ADD:
        return _same(node, inputs)
    if node.kind == OpKind.GLOBAL_AVG_POOL:
        n, c, _, _ = inputs[0]
        return (n, c, 1, 1)
    if node.kind == OpKind.BILINEAR_RESIZE and size_of:
        n, c, _, _ = inputs[0]
        return (n, c, size_of[2], size_of[3])
    if node.kind == OpKind.AFFINITY:
        n, _, h, w = _same(node, inputs)
        return (n, h * w, h, w)
    if node.kind == OpKind.ATTN_COLLAPSE:
        n, _, h, w = inputs[0]
        return (n, 1, h, w)
    if node.kind == OpKind.MUL_ATTENTION:
        value, attention = inputs
        if attention != (value[0], 1, value[2], value[3]):
            msg = f"Attention {attention} of '{node.name}' cannot be broadcast over {value}."
            raise ContextPyramidShapeError(msg)
        return value
    if node.kind == OpKind.NEAREST_UPSAMPLE:
        n, c, h, w = inputs[0]
        return (n, c, h * node.scale, w * node.scale)
    msg = f"Cannot infer the shape of node '{node.name}' of kind '{node.kind.value}'."
    raise ContextPyramidShapeError(msg)


def infer_shapes(
    graph: LayerGraph, input_shapes: Mapping[str, Shape4]
) -> dict[str, Shape4]:
    """
    Output shape of every node, in graph order.

    Raises:
        ContextPyramidShapeError: if an input is missing or any node's inputs disagree
    """
    shapes: dict[str, Shape4] = {}
    for node in graph:
        if node.kind == OpKind.INPUT:
            if node.name not in input_shapes:
                msg = f"No shape was given for input '{node.name}'."
                raise ContextPyramidShapeError(msg)
            shape = tuple(input_shapes[node.name])
            if len(shape) != 4 or shape[1] != node.out_channels:
                msg = f"Input '{node.name}' expects {node.out_channels} channels, got shape {shape}."
                raise ContextPyramidShapeError(msg)
            shapes[node.name] = (shape[0], shape[1], shape[2], shape[3])
            continue
        shapes[node.name] = node_shape(
            node,
            [shapes[name] for name in node.inputs],
            shapes[node.size_of] if node.size_of else None,
        )
    return shapes
