from pytest import fixture

from context_pyramid.graph import GraphBuilder
from context_pyramid.ops import ConvSpec


@fixture
def branching_graph():
    """An input read by two convolutions whose outputs are concatenated and summed"""
    builder = GraphBuilder()
    x = builder.input("x", 2)
    left = builder.conv("left", x, 3, ConvSpec.square(3, padding=1), relu=True)
    right = builder.conv("right", x, 3, ConvSpec.square(1))
    both = builder.concat("both", [left, right])
    pooled = builder.global_avg_pool("pooled", both)
    resized = builder.resize_like("resized", pooled, both)
    merged = builder.add("merged", [both, resized])
    return builder.build([merged, right])
