import numpy as np
from pytest import fixture


def naive_conv2d(x, weight, bias, stride=1, padding=0, dilation=1):
    """Direct sliding-window cross-correlation over every output position"""
    n, ci, h, w = x.shape
    co, _, kh, kw = weight.shape
    padded = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    oh = (h + 2 * padding - dilation * (kh - 1) - 1) // stride + 1
    ow = (w + 2 * padding - dilation * (kw - 1) - 1) // stride + 1
    out = np.zeros((n, co, oh, ow), dtype=x.dtype)
    for b in range(n):
        for o in range(co):
            for y in range(oh):
                for x0 in range(ow):
                    total = bias[o]
                    for c in range(ci):
                        for i in range(kh):
                            for j in range(kw):
                                total += (
                                    weight[o, c, i, j]
                                    * padded[
                                        b,
                                        c,
                                        y * stride + i * dilation,
                                        x0 * stride + j * dilation,
                                    ]
                                )
                    out[b, o, y, x0] = total
    return out


@fixture
def conv_oracle():
    return naive_conv2d
