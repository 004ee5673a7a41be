"""Run the pyramid forward on one input"""

import typer

from context_pyramid import console
from context_pyramid.exceptions import ContextPyramidError
from context_pyramid.graph import init_parameters
from context_pyramid.logging import get_logger
from context_pyramid.pyramid import (
    acfpn_build,
    acfpn_forward,
    level_strides,
    level_summary,
    load_input,
)
from context_pyramid.serialisers import write_tensor

from .common import (
    ConfigOption,
    OutOption,
    PrecisionOption,
    SeedOption,
    load_run_config,
    output_directory,
    write_lines,
)


def forward(
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    precision: PrecisionOption = None,
) -> None:
    """Run the pyramid on one input and summarise every level"""
    logger = get_logger()
    run_config = load_run_config(config, seed, out, precision)
    network = run_config.network
    rates = ", ".join(str(rate) for rate in network.cem.rates)
    logger.info(f"CEM with {network.cem.paths} paths (rates {rates}).")

    try:
        image = load_input(run_config.input, run_config.seed, run_config.precision)
        weights = init_parameters(
            acfpn_build(network), run_config.seed, run_config.precision
        )
        levels = acfpn_forward(image, weights, network)
    except ContextPyramidError as exc:
        logger.critical("Forward run failed.")
        raise typer.Exit(1) from exc

    summary = level_summary(levels)
    strides = level_strides(network)
    console.tabulate(
        ["Level", "Stride", "Shape", "Min", "Max", "Mean"],
        [
            [
                name,
                str(strides[name]),
                str(stats.shape),
                f"{stats.minimum:.6g}",
                f"{stats.maximum:.6g}",
                f"{stats.mean:.6g}",
            ]
            for name, stats in summary.items()
        ],
        title="Pyramid levels",
        numeric={1, 3, 4, 5},
    )

    directory = output_directory(run_config)
    lines = [f"cem.paths = {network.cem.paths}"]
    for name, stats in summary.items():
        lines.append(f"{name}.shape = {','.join(str(size) for size in stats.shape)}")
        lines.append(f"{name}.min = {stats.minimum!r}")
        lines.append(f"{name}.max = {stats.maximum!r}")
        lines.append(f"{name}.mean = {stats.mean!r}")
    write_lines(directory / "summary.txt", lines)

    if run_config.output.dump_tensors:
        try:
            for name, tensor in levels.items():
                write_tensor(directory / f"{name}.acft", tensor)
        except ContextPyramidError as exc:
            logger.critical("Could not write tensor dumps.")
            raise typer.Exit(1) from exc
        logger.info(f"Wrote {len(levels)} tensor dumps to [green]{directory}[/].")
