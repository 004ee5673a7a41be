from .acfpn import (
    LevelSummary,
    acfpn_build,
    acfpn_forward,
    level_strides,
    level_summary,
    pyramid_backward,
    pyramid_grad_check,
    run_acfpn,
)
from .backbone import (
    IMAGE_INPUT,
    STAGES,
    backbone_build,
    backbone_forward,
    check_image,
    stage_node,
)
from .inputs import load_input, synthetic_image

__all__ = [
    "LevelSummary",
    "IMAGE_INPUT",
    "STAGES",
    "acfpn_build",
    "acfpn_forward",
    "backbone_build",
    "backbone_forward",
    "check_image",
    "level_strides",
    "level_summary",
    "load_input",
    "pyramid_backward",
    "pyramid_grad_check",
    "run_acfpn",
    "stage_node",
    "synthetic_image",
]
