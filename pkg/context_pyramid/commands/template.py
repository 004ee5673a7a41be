"""Write a fully defaulted configuration file"""

from pathlib import Path
from typing import Annotated, Optional

import typer

from context_pyramid import console
from context_pyramid.config import RunConfig


def template(
    file: Annotated[
        Optional[Path],  # noqa: UP007
        typer.Option(help="File path to write the configuration template to."),
    ] = None,
) -> None:
    """Print or write a configuration file with every default filled in"""
    run_config = RunConfig.template()
    if file:
        run_config.to_filepath(file)
    else:
        console.print(run_config.to_key_values())
