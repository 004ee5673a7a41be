"""Options and helpers shared by every subcommand"""

from pathlib import Path
from typing import Annotated, Optional

import typer

from context_pyramid.config import RunConfig
from context_pyramid.directories import output_dir
from context_pyramid.exceptions import ContextPyramidError
from context_pyramid.logging import get_logger
from context_pyramid.types import PrecisionFlag
from context_pyramid.validators import typer_output_directory, typer_seed

ConfigOption = Annotated[
    Optional[Path],  # noqa: UP007
    typer.Option(
        "--config",
        "-c",
        help="Key-value (or .yaml) configuration file. Defaults are used for anything it omits.",
    ),
]
SeedOption = Annotated[
    Optional[int],  # noqa: UP007
    typer.Option(
        "--seed",
        "-s",
        help="Seed for weight initialisation and synthetic inputs.",
        callback=typer_seed,
    ),
]
OutOption = Annotated[
    Optional[Path],  # noqa: UP007
    typer.Option(
        "--out",
        "-o",
        help="Directory to write artefacts to.",
        callback=typer_output_directory,
    ),
]
PrecisionOption = Annotated[
    Optional[PrecisionFlag],  # noqa: UP007
    typer.Option("--precision", "-p", help="Floating point precision."),
]


def load_run_config(
    config: Path | None,
    seed: int | None,
    out: Path | None,
    precision: PrecisionFlag | None,
) -> RunConfig:
    """
    Load a config file, if any, and apply command line overrides.

    Exits with status 1 if the file cannot be loaded.
    """
    logger = get_logger()
    try:
        run_config = RunConfig.from_filepath(config) if config else RunConfig()
        if seed is not None:
            run_config.seed = seed
        if out is not None:
            run_config.output.directory = out
        if precision is not None:
            run_config.precision = precision.precision
    except (ContextPyramidError, ValueError) as exc:
        logger.critical(f"Could not load configuration from [green]{config}[/].")
        raise typer.Exit(1) from exc
    if config:
        logger.info(f"Loaded configuration from [green]{config}[/].")
    return run_config


def output_directory(run_config: RunConfig) -> Path:
    directory = run_config.output.directory or output_dir()
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def write_lines(path: Path, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8") as f_out:
        f_out.write("\n".join(lines) + "\n")
    get_logger().info(f"Wrote [green]{path}[/].")
