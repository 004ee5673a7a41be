from .cem import (
    CEM_INPUT,
    CEM_OUTPUT,
    add_cem,
    cem_build,
    cem_forward,
    channel_plan,
    dense_parameter_delta,
)

__all__ = [
    "CEM_INPUT",
    "CEM_OUTPUT",
    "add_cem",
    "cem_build",
    "cem_forward",
    "channel_plan",
    "dense_parameter_delta",
]
