"""Computation graphs shared by the model builders and the complexity analysis"""

from .builder import GraphBuilder
from .executor import (
    GraphGradients,
    GraphValues,
    backprop_graph,
    graph_grad_check,
    run_graph,
)
from .layer_graph import LayerGraph, LayerNode
from .parameters import (
    GraphWeights,
    check_parameters,
    count_parameter_values,
    flatten_parameters,
    init_parameters,
    node_rng,
    zero_parameters,
)
from .shapes import infer_shapes, node_shape

__all__ = [
    "GraphBuilder",
    "GraphGradients",
    "GraphValues",
    "GraphWeights",
    "LayerGraph",
    "LayerNode",
    "backprop_graph",
    "check_parameters",
    "count_parameter_values",
    "flatten_parameters",
    "graph_grad_check",
    "infer_shapes",
    "init_parameters",
    "node_rng",
    "node_shape",
    "run_graph",
    "zero_parameters",
]
