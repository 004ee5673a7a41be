from .config_sections import (
    AttentionConfig,
    BackboneConfig,
    CemConfig,
    GradcheckConfig,
    InputConfig,
    OutputConfig,
    PyramidConfig,
)
from .run_config import NetworkConfig, RunConfig

__all__ = [
    "AttentionConfig",
    "BackboneConfig",
    "CemConfig",
    "GradcheckConfig",
    "InputConfig",
    "NetworkConfig",
    "OutputConfig",
    "PyramidConfig",
    "RunConfig",
]
