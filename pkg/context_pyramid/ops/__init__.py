"""Dense NCHW tensor ops with explicit backward passes"""

from .affinity import (
    affinity_matrix,
    affinity_matrix_backward,
    attn_collapse,
    attn_collapse_backward,
)
from .conv import conv2d, conv2d_backward
from .conv_spec import ConvSpec
from .elementwise import (
    add,
    add_backward,
    concat_channels,
    concat_channels_backward,
    mul_attention,
    mul_attention_backward,
    relu,
    relu_backward,
    sigmoid,
    sigmoid_backward,
)
from .pooling import (
    global_avg_pool,
    global_avg_pool_backward,
    max_pool2d,
    max_pool2d_backward,
)
from .registry import OP_REGISTRY, DifferentiableOp, lookup_op, register_op
from .resize import (
    bilinear_resize,
    bilinear_resize_backward,
    nearest_upsample,
    nearest_upsample_backward,
)
from .tensor import GradPair, as_tensor, check_tensor

# The gradient checker resolves ops registered by every module above
from .gradcheck import check_gradients, grad_check, relative_error  # noqa: I001

__all__ = [
    "OP_REGISTRY",
    "ConvSpec",
    "DifferentiableOp",
    "GradPair",
    "add",
    "add_backward",
    "affinity_matrix",
    "affinity_matrix_backward",
    "as_tensor",
    "attn_collapse",
    "attn_collapse_backward",
    "bilinear_resize",
    "bilinear_resize_backward",
    "check_gradients",
    "check_tensor",
    "concat_channels",
    "concat_channels_backward",
    "conv2d",
    "conv2d_backward",
    "global_avg_pool",
    "global_avg_pool_backward",
    "grad_check",
    "lookup_op",
    "max_pool2d",
    "max_pool2d_backward",
    "mul_attention",
    "mul_attention_backward",
    "nearest_upsample",
    "nearest_upsample_backward",
    "register_op",
    "relative_error",
    "relu",
    "relu_backward",
    "sigmoid",
    "sigmoid_backward",
]
