from .deform_conv import (
    DeformConv2d,
    bilinear_sample,
    deform_conv2d,
    deform_conv2d_backward,
    sampling_positions,
)

__all__ = [
    "DeformConv2d",
    "bilinear_sample",
    "deform_conv2d",
    "deform_conv2d_backward",
    "sampling_positions",
]
