"""Command line entrypoint for the acfpn application"""

from typing import Annotated, Optional

import typer

from context_pyramid import __version__, console
from context_pyramid.logging import set_console_level, show_console_level

from .dump_attention import dump_attention
from .forward import forward
from .gradcheck import gradcheck
from .report import report
from .template import template

# Create the application
application = typer.Typer(
    context_settings={"help_option_names": ["-h", "--help"]},
    invoke_without_command=True,
    name="acfpn",
    no_args_is_help=True,
)


# Custom application callback
# This is executed before
@application.callback()
def callback(
    verbose: Annotated[  # noqa: FBT002
        bool,
        typer.Option(
            "--verbose",
            "-v",
            help="Increase the verbosity of console output.",
        ),
    ] = False,
    show_level: Annotated[  # noqa: FBT002
        bool,
        typer.Option(
            "--show-level",
            "-l",
            help="Show Log level.",
        ),
    ] = False,
    version: Annotated[
        Optional[bool],  # noqa: UP007
        typer.Option(
            "--version", "-V", help="Display the version of this application."
        ),
    ] = None,
) -> None:
    """Attention-guided context feature pyramid tools"""

    if verbose:
        set_console_level("DEBUG")

    if show_level:
        show_console_level()

    if version:
        console.print(f"acfpn {__version__}")
        raise typer.Exit()


# Register commands
application.command(help="Run the pyramid forward and summarise each level.")(forward)
application.command(help="Check every backward pass against finite differences.")(
    gradcheck
)
application.command(help="Report parameters, MACs and receptive fields.")(report)
application.command(
    name="dump-attention", help="Export CxAM and CnAM attention maps as PGM files."
)(dump_attention)
application.command(help="Write a fully defaulted configuration file.")(template)


def main() -> None:
    """Run the application"""
    application()
