"""Parameter storage and deterministic initialisation for LayerGraphs"""

import zlib
from collections.abc import Mapping

import numpy as np

from context_pyramid.exceptions import ContextPyramidShapeError, ContextPyramidTypeError
from context_pyramid.logging import get_logger
from context_pyramid.types import OpKind, Precision, Tensor

from .layer_graph import LayerGraph, LayerNode

# Node name -> parameter name -> tensor
GraphWeights = dict[str, dict[str, Tensor]]


def node_rng(seed: int, name: str) -> np.random.Generator:
    """Random stream for one node, independent of every other node in the graph"""
    return np.random.default_rng([seed, zlib.crc32(name.encode("utf-8"))])


def _initialise_node(
    node: LayerNode, seed: int, precision: Precision
) -> dict[str, Tensor]:
    shapes = node.parameter_shapes()
    _, ci, kh, kw = shapes["weight"]
    fan_in = ci * kh * kw
    bound = 1.0 / np.sqrt(fan_in) if fan_in else 0.0
    rng = node_rng(seed, node.name)
    # Draw in double precision so both precisions share the same values
    params = {"weight": rng.uniform(-bound, bound, size=shapes["weight"])}
    if "bias" in shapes:
        params["bias"] = rng.uniform(-bound, bound, size=shapes["bias"])
    if node.kind == OpKind.DEFORM_CONV:
        params["offset_weight"] = np.zeros(shapes["offset_weight"])
        params["offset_bias"] = np.zeros(shapes["offset_bias"])
    return {key: value.astype(precision.dtype) for key, value in params.items()}


def init_parameters(
    graph: LayerGraph, seed: int, precision: Precision = Precision.SINGLE
) -> GraphWeights:
    """
    Fan-in scaled uniform initialisation of every convolution in a graph.

    Weights and biases are drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)) using a
    stream derived from (seed, node name). Deformable offset branches start at
    zero so the layer begins as a plain dilated convolution.
    """
    weights = {
        node.name: _initialise_node(node, seed, precision)
        for node in graph.parameter_nodes
    }
    get_logger().debug(
        f"Initialised {len(weights)} parametrised nodes with seed {seed} at {precision.value} precision."
    )
    return weights


def zero_parameters(
    graph: LayerGraph, precision: Precision = Precision.SINGLE
) -> GraphWeights:
    return {
        node.name: {
            key: np.zeros(shape, dtype=precision.dtype)
            for key, shape in node.parameter_shapes().items()
        }
        for node in graph.parameter_nodes
    }


def check_parameters(
    graph: LayerGraph, weights: Mapping[str, Mapping[str, Tensor]]
) -> None:
    """Ensure every parametrised node has tensors of the expected shapes"""
    for node in graph.parameter_nodes:
        if node.name not in weights:
            msg = f"No parameters were given for node '{node.name}'."
            raise ContextPyramidShapeError(msg)
        for key, shape in node.parameter_shapes().items():
            tensor = weights[node.name].get(key)
            if not isinstance(tensor, np.ndarray):
                msg = f"Parameter '{node.name}.{key}' is missing."
                raise ContextPyramidShapeError(msg)
            if tensor.shape != shape:
                msg = f"Parameter '{node.name}.{key}' has shape {tensor.shape}, expected {shape}."
                raise ContextPyramidShapeError(msg)
            if tensor.dtype not in (np.float32, np.float64):
                msg = f"Parameter '{node.name}.{key}' has unsupported dtype {tensor.dtype}."
                raise ContextPyramidTypeError(msg)


def flatten_parameters(weights: Mapping[str, Mapping[str, Tensor]]) -> dict[str, Tensor]:
    """Flat 'node.parameter' view of nested weights, sharing the same arrays"""
    return {
        f"{node}.{key}": tensor
        for node, params in weights.items()
        for key, tensor in params.items()
    }


def count_parameter_values(weights: Mapping[str, Mapping[str, Tensor]]) -> int:
    return sum(tensor.size for tensor in flatten_parameters(weights).values())
