import numpy as np
from pytest import fixture

from context_pyramid.attention import CnamWeights, CxamWeights


def make_projection(rng, out_channels, in_channels, *, zero=False):
    if zero:
        return np.zeros((out_channels, in_channels, 1, 1)), np.zeros(out_channels)
    return (
        0.3 * rng.standard_normal((out_channels, in_channels, 1, 1)),
        0.1 * rng.standard_normal(out_channels),
    )


@fixture
def cxam_weights(rng) -> CxamWeights:
    wq, bq = make_projection(rng, 4, 6)
    wk, bk = make_projection(rng, 4, 6)
    wv, bv = make_projection(rng, 6, 6)
    return CxamWeights(wq=wq, bq=bq, wk=wk, bk=bk, wv=wv, bv=bv)


@fixture
def cnam_weights(rng) -> CnamWeights:
    wp, bp = make_projection(rng, 4, 10)
    wz, bz = make_projection(rng, 4, 10)
    return CnamWeights(wp=wp, bp=bp, wz=wz, bz=bz)


@fixture
def projection(rng):
    """Random or zero 1x1 projection kernels with their biases"""

    def factory(out_channels, in_channels, *, zero=False):
        return make_projection(rng, out_channels, in_channels, zero=zero)

    return factory
