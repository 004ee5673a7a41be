"""Attention-guided module: context (CxAM) and content (CnAM) attention"""

from .modules import (
    FUSED_OUTPUT,
    AttentionNodes,
    add_attention,
    add_cnam,
    add_cxam,
    am_build,
    am_fuse,
    cnam_build,
    cnam_forward,
    cxam_build,
    cxam_forward,
)
from .weights import CnamWeights, CxamWeights

__all__ = [
    "FUSED_OUTPUT",
    "AttentionNodes",
    "CnamWeights",
    "CxamWeights",
    "add_attention",
    "add_cnam",
    "add_cxam",
    "am_build",
    "am_fuse",
    "cnam_build",
    "cnam_forward",
    "cxam_build",
    "cxam_forward",
]
