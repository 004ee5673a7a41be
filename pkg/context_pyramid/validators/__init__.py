from .typer import typer_output_directory, typer_seed
from .validators import (
    as_list,
    channel_ladder,
    dilation_rates,
    epsilon,
    image_shape,
    output_directory,
    seed,
    tolerance,
    unique_list,
)

__all__ = [
    "as_list",
    "channel_ladder",
    "dilation_rates",
    "epsilon",
    "image_shape",
    "output_directory",
    "seed",
    "tolerance",
    "typer_output_directory",
    "typer_seed",
    "unique_list",
]
