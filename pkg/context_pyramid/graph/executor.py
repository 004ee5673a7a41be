"""Evaluate a LayerGraph forwards and compose its per-op backward passes in reverse"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from context_pyramid.deform.deform_conv import (
    DeformConv2d,
    deform_conv2d,
    deform_conv2d_backward,
)
from context_pyramid.exceptions import ContextPyramidShapeError, ContextPyramidTypeError
from context_pyramid.logging import get_logger
from context_pyramid.ops.affinity import (
    affinity_matrix,
    affinity_matrix_backward,
    attn_collapse,
    attn_collapse_backward,
)
from context_pyramid.ops.conv import conv2d, conv2d_backward
from context_pyramid.ops.elementwise import (
    add,
    concat_channels,
    concat_channels_backward,
    mul_attention,
    mul_attention_backward,
    relu,
)
from context_pyramid.ops.gradcheck import check_gradients
from context_pyramid.ops.pooling import (
    global_avg_pool,
    global_avg_pool_backward,
    max_pool2d,
    max_pool2d_backward,
)
from context_pyramid.ops.resize import (
    bilinear_resize,
    bilinear_resize_backward,
    nearest_upsample,
    nearest_upsample_backward,
)
from context_pyramid.ops.tensor import check_tensor
from context_pyramid.types import OpKind, Tensor

from .layer_graph import LayerGraph, LayerNode
from .parameters import GraphWeights, check_parameters, flatten_parameters

# Node name -> value computed for that node
GraphValues = dict[str, Tensor]


@dataclass
class GraphGradients:
    """Gradients of a scalar loss with respect to graph inputs and parameters"""

    inputs: dict[str, Tensor] = field(default_factory=dict)
    parameters: GraphWeights = field(default_factory=dict)

    def flat(self) -> dict[str, Tensor]:
        """Input gradients together with 'node.parameter' gradients"""
        return {**self.inputs, **flatten_parameters(self.parameters)}


def _bias(node: LayerNode, params: Mapping[str, Tensor]) -> Tensor:
    """Bias of a convolution node, zero when the node has none"""
    if node.bias:
        return params["bias"]
    weight = params["weight"]
    return np.zeros(weight.shape[0], dtype=weight.dtype)


def _deform_layer(node: LayerNode, params: Mapping[str, Tensor]) -> DeformConv2d:
    if node.spec is None:
        msg = f"Node '{node.name}' has no window spec."
        raise ContextPyramidShapeError(msg)
    return DeformConv2d(
        weight=params["weight"],
        bias=_bias(node, params),
        offset_weight=params["offset_weight"],
        offset_bias=params["offset_bias"],
        spec=node.spec,
    )


def _evaluate(
    node: LayerNode, weights: GraphWeights, values: GraphValues
) -> Tensor:
    args = [values[name] for name in node.inputs]
    spec = node.spec
    match node.kind:
        case OpKind.CONV if spec is not None:
            params = weights[node.name]
            out = conv2d(args[0], params["weight"], _bias(node, params), spec)
            return relu(out) if node.relu else out
        case OpKind.DEFORM_CONV:
            out = deform_conv2d(args[0], _deform_layer(node, weights[node.name]))
            return relu(out) if node.relu else out
        case OpKind.CONCAT:
            return concat_channels(args)
        case OpKind.ADD:
            total = args[0].copy()
            for term in args[1:]:
                total = add(total, term)
            return total
        case OpKind.GLOBAL_AVG_POOL:
            return global_avg_pool(args[0])
        case OpKind.BILINEAR_RESIZE if node.size_of is not None:
            _, _, h, w = values[node.size_of].shape
            return bilinear_resize(args[0], h, w)
        case OpKind.MAX_POOL if spec is not None:
            return max_pool2d(args[0], spec.kernel, spec.stride, spec.padding)
        case OpKind.NEAREST_UPSAMPLE:
            return nearest_upsample(args[0], node.scale)
        case OpKind.AFFINITY:
            return affinity_matrix(args[0], args[1])
        case OpKind.ATTN_COLLAPSE:
            return attn_collapse(args[0])
        case OpKind.MUL_ATTENTION:
            return mul_attention(args[0], args[1])
    msg = f"Cannot evaluate node '{node.name}' of kind '{node.kind.value}'."
    raise ContextPyramidShapeError(msg)


def _check_precision(weights: GraphWeights, inputs: Mapping[str, Tensor]) -> None:
    dtypes = {tensor.dtype for tensor in inputs.values()}
    dtypes |= {tensor.dtype for tensor in flatten_parameters(weights).values()}
    if len(dtypes) > 1:
        msg = f"A graph must run at a single precision, found {sorted(str(d) for d in dtypes)}."
        raise ContextPyramidTypeError(msg)


def run_graph(
    graph: LayerGraph, weights: GraphWeights, inputs: Mapping[str, Tensor]
) -> GraphValues:
    """
    Evaluate every node of a graph in order.

    Returns:
        the value of every node, keyed by node name

    Raises:
        ContextPyramidShapeError: if inputs or parameters do not fit the graph
        ContextPyramidTypeError: if tensors mix single and double precision
    """
    check_parameters(graph, weights)
    values: GraphValues = {}
    for node in graph.input_nodes:
        if node.name not in inputs:
            msg = f"No value was given for input '{node.name}'."
            raise ContextPyramidShapeError(msg)
        tensor = check_tensor(inputs[node.name], node.name)
        if tensor.shape[1] != node.out_channels:
            msg = f"Input '{node.name}' expects {node.out_channels} channels, got shape {tensor.shape}."
            raise ContextPyramidShapeError(msg)
        values[node.name] = tensor
    _check_precision(weights, values)

    logger = get_logger()
    for node in graph:
        if node.kind == OpKind.INPUT:
            continue
        values[node.name] = _evaluate(node, weights, values)
        logger.debug(f"Evaluated '{node.name}' -> {values[node.name].shape}.")
    return values


def _accumulate(grads: dict[str, Tensor], name: str, grad: Tensor) -> None:
    if name in grads:
        grads[name] = grads[name] + grad
    else:
        grads[name] = np.array(grad, copy=True)


def _through_relu(node: LayerNode, values: GraphValues, grad_out: Tensor) -> Tensor:
    # The stored value is post-activation, so it is positive exactly where the input was
    if not node.relu:
        return grad_out
    return np.where(values[node.name] > 0, grad_out, 0.0).astype(grad_out.dtype)


def _node_backward(
    node: LayerNode,
    weights: GraphWeights,
    values: GraphValues,
    grad_out: Tensor,
) -> tuple[list[Tensor], dict[str, Tensor]]:
    """Gradients for each input of a node, plus those of its own parameters"""
    args = [values[name] for name in node.inputs]
    spec = node.spec
    match node.kind:
        case OpKind.CONV if spec is not None:
            grad_out = _through_relu(node, values, grad_out)
            params = weights[node.name]
            result = conv2d_backward(
                args[0], params["weight"], _bias(node, params), spec, grad_out
            )
            grads = dict(result.grads)
            if not node.bias:
                del grads["bias"]
            return [grads.pop("input")], grads
        case OpKind.DEFORM_CONV:
            grad_out = _through_relu(node, values, grad_out)
            result = deform_conv2d_backward(
                args[0], _deform_layer(node, weights[node.name]), grad_out
            )
            grads = dict(result.grads)
            if not node.bias:
                del grads["bias"]
            return [grads.pop("input")], grads
        case OpKind.CONCAT:
            result = concat_channels_backward(args, grad_out)
            return [result.grads[f"input_{idx}"] for idx in range(len(args))], {}
        case OpKind.ADD:
            return [grad_out for _ in args], {}
        case OpKind.GLOBAL_AVG_POOL:
            return [global_avg_pool_backward(args[0], grad_out).grads["input"]], {}
        case OpKind.BILINEAR_RESIZE:
            _, _, h, w = grad_out.shape
            result = bilinear_resize_backward(args[0], h, w, grad_out)
            return [result.grads["input"]], {}
        case OpKind.MAX_POOL if spec is not None:
            result = max_pool2d_backward(
                args[0], spec.kernel, spec.stride, grad_out, spec.padding
            )
            return [result.grads["input"]], {}
        case OpKind.NEAREST_UPSAMPLE:
            result = nearest_upsample_backward(args[0], grad_out, node.scale)
            return [result.grads["input"]], {}
        case OpKind.AFFINITY:
            result = affinity_matrix_backward(args[0], args[1], grad_out)
            return [result.grads["q"], result.grads["k"]], {}
        case OpKind.ATTN_COLLAPSE:
            return [attn_collapse_backward(args[0], grad_out).grads["r"]], {}
        case OpKind.MUL_ATTENTION:
            result = mul_attention_backward(args[0], args[1], grad_out)
            return [result.grads["v"], result.grads["attn"]], {}
    msg = f"Cannot differentiate node '{node.name}' of kind '{node.kind.value}'."
    raise ContextPyramidShapeError(msg)


def backprop_graph(
    graph: LayerGraph,
    weights: GraphWeights,
    values: GraphValues,
    grad_outputs: Mapping[str, Tensor],
) -> GraphGradients:
    """
    Reverse pass over a graph that has already been run.

    Upstream gradients are given for any subset of nodes; nodes read by several
    consumers accumulate the sum of their gradients. Parameters of nodes that do
    not influence any given output receive zero gradients.

    Raises:
        ContextPyramidShapeError: if an upstream gradient does not match its node
    """
    grads: dict[str, Tensor] = {}
    for name, grad in grad_outputs.items():
        if name not in values:
            msg = f"Gradient given for unknown node '{name}'."
            raise ContextPyramidShapeError(msg)
        if grad.shape != values[name].shape:
            msg = f"Gradient for '{name}' has shape {grad.shape}, expected {values[name].shape}."
            raise ContextPyramidShapeError(msg)
        _accumulate(grads, name, grad)

    logger = get_logger()
    parameters: GraphWeights = {}
    for node in reversed(graph.nodes):
        if node.kind == OpKind.INPUT or node.name not in grads:
            continue
        input_grads, param_grads = _node_backward(
            node, weights, values, grads[node.name]
        )
        for name, grad in zip(node.inputs, input_grads, strict=True):
            _accumulate(grads, name, grad)
        if param_grads:
            parameters[node.name] = param_grads
        logger.debug(f"Back-propagated through '{node.name}'.")

    for node in graph.parameter_nodes:
        if node.name not in parameters:
            parameters[node.name] = {
                key: np.zeros_like(tensor) for key, tensor in weights[node.name].items()
            }
    return GraphGradients(
        inputs={
            node.name: grads.get(node.name, np.zeros_like(values[node.name]))
            for node in graph.input_nodes
        },
        parameters=parameters,
    )


def graph_grad_check(
    graph: LayerGraph,
    weights: GraphWeights,
    inputs: Mapping[str, Tensor],
    epsilon: float = 1e-6,
    *,
    max_samples: int | None = None,
    seed: int = 0,
) -> float:
    """
    Maximum relative error of the graph's reverse pass against central differences.

    The loss is the sum of every graph output; inputs and all parameters are
    checked.
    """
    names = set(inputs)

    def split(
        flat: Mapping[str, np.ndarray],
    ) -> tuple[dict[str, Tensor], GraphWeights]:
        node_inputs = {name: flat[name] for name in names}
        params: GraphWeights = {}
        for key, tensor in flat.items():
            if key in names:
                continue
            node, param = key.rsplit(".", 1)
            params.setdefault(node, {})[param] = tensor
        return node_inputs, params

    def loss(flat: Mapping[str, np.ndarray]) -> float:
        node_inputs, params = split(flat)
        values = run_graph(graph, params, node_inputs)
        return float(sum(values[name].sum() for name in graph.outputs))

    def gradients(flat: Mapping[str, np.ndarray]) -> Mapping[str, np.ndarray]:
        node_inputs, params = split(flat)
        values = run_graph(graph, params, node_inputs)
        upstream = {name: np.ones_like(values[name]) for name in graph.outputs}
        return backprop_graph(graph, params, values, upstream).flat()

    errors = check_gradients(
        loss,
        gradients,
        {**inputs, **flatten_parameters(weights)},
        epsilon,
        max_samples=max_samples,
        seed=seed,
    )
    worst = max(errors.values(), default=0.0)
    get_logger().debug(f"Graph gradient check over {len(errors)} tensors: {worst:.3e}.")
    return worst
