"""Gather and scatter of sliding windows (im2col / col2im)"""

import numpy as np

from context_pyramid.types import Tensor

from .conv_spec import ConvSpec


def pad_spatial(x: Tensor, padding: tuple[int, int], fill: float = 0.0) -> Tensor:
    ph, pw = padding
    if not (ph or pw):
        return x
    return np.pad(
        x, ((0, 0), (0, 0), (ph, ph), (pw, pw)), mode="constant", constant_values=fill
    )


def gather_windows(x: Tensor, spec: ConvSpec, fill: float = 0.0) -> Tensor:
    """
    Collect every kernel tap of every output position.

    Returns:
        array of shape (n, c, kh * kw, oh, ow) with taps in row-major kernel order
    """
    n, c, h, w = x.shape
    kh, kw = spec.kernel
    sh, sw = spec.stride
    dh, dw = spec.dilation
    oh, ow = spec.output_size(h, w)
    padded = pad_spatial(x, spec.padding, fill)
    windows = np.empty((n, c, kh * kw, oh, ow), dtype=x.dtype)
    for i in range(kh):
        for j in range(kw):
            y0, x0 = i * dh, j * dw
            windows[:, :, i * kw + j] = padded[
                :, :, y0 : y0 + sh * oh : sh, x0 : x0 + sw * ow : sw
            ]
    return windows


def scatter_windows(
    windows: Tensor, input_shape: tuple[int, int, int, int], spec: ConvSpec
) -> Tensor:
    """Transpose of gather_windows: accumulate tap values back onto the input grid"""
    n, c, h, w = input_shape
    kh, kw = spec.kernel
    sh, sw = spec.stride
    ph, pw = spec.padding
    dh, dw = spec.dilation
    oh, ow = windows.shape[-2:]
    padded = np.zeros((n, c, h + 2 * ph, w + 2 * pw), dtype=windows.dtype)
    # Taps are visited in a fixed order so accumulation is reproducible
    for i in range(kh):
        for j in range(kw):
            y0, x0 = i * dh, j * dw
            padded[:, :, y0 : y0 + sh * oh : sh, x0 : x0 + sw * ow : sw] += windows[
                :, :, i * kw + j
            ]
    return padded[:, :, ph : ph + h, pw : pw + w]
