"""Run the finite-difference gradient suite"""

import typer

from context_pyramid import console
from context_pyramid.logging import get_logger
from context_pyramid.types import Precision
from context_pyramid.verification import run_suite

from .common import (
    ConfigOption,
    OutOption,
    PrecisionOption,
    SeedOption,
    load_run_config,
    output_directory,
    write_lines,
)


def gradcheck(
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    precision: PrecisionOption = None,
) -> None:
    """Compare every analytic backward pass with central finite differences"""
    logger = get_logger()
    run_config = load_run_config(config, seed, out, precision)
    requested_single = (
        precision is not None and precision.precision == Precision.SINGLE
    ) or (
        precision is None
        and run_config.precision_is_explicit
        and run_config.precision == Precision.SINGLE
    )
    if requested_single:
        logger.critical("Gradient checks require double precision; use '--precision f64'.")
        raise typer.Exit(1)

    logger.info(
        f"Running gradient checks with epsilon {run_config.gradcheck.epsilon:g} and seed {run_config.seed}."
    )
    results = run_suite(run_config.gradcheck, run_config.seed)
    console.tabulate(
        ["Check", "Max relative error", "Tolerance", "Status"],
        [
            [
                result.name,
                f"{result.error:.3e}",
                f"{result.tolerance:.0e}",
                "[green]pass[/]" if result.passed else "[red]FAIL[/]",
            ]
            for result in results
        ],
        title="Gradient checks",
        numeric={1, 2},
    )
    write_lines(
        output_directory(run_config) / "gradcheck.txt",
        [f"{result.name} = {result.error!r}" for result in results],
    )

    failures = [result for result in results if not result.passed]
    for result in failures:
        reason = result.message or f"error {result.error:.3e} exceeds {result.tolerance:.0e}"
        logger.critical(f"Gradient check '{result.name}' failed: {reason}.")
    if failures:
        raise typer.Exit(1)
    logger.info(f"All {len(results)} gradient checks passed.")
