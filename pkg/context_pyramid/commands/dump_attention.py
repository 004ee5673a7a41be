"""Export attention maps as 8-bit graymaps"""

import numpy as np
import typer

from context_pyramid.exceptions import ContextPyramidError
from context_pyramid.graph import init_parameters
from context_pyramid.logging import get_logger
from context_pyramid.pyramid import acfpn_build, load_input, run_acfpn
from context_pyramid.serialisers import to_graymap, write_pgm

from .common import (
    ConfigOption,
    OutOption,
    PrecisionOption,
    SeedOption,
    load_run_config,
    output_directory,
    write_lines,
)

ATTENTION_MAPS = {"cxam": "cxam_attention", "cnam": "cnam_attention"}


def dump_attention(
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    precision: PrecisionOption = None,
) -> None:
    """Write the CxAM and CnAM attention maps of the first image as PGM files"""
    logger = get_logger()
    run_config = load_run_config(config, seed, out, precision)
    attention = run_config.attention
    if not attention.enabled:
        logger.critical("Attention maps need 'attention.cxam' or 'attention.cnam' enabled.")
        raise typer.Exit(1)
    network = run_config.network

    try:
        image = load_input(run_config.input, run_config.seed, run_config.precision)
        weights = init_parameters(
            acfpn_build(network), run_config.seed, run_config.precision
        )
        values = run_acfpn(image, weights, network)
    except ContextPyramidError as exc:
        logger.critical("Forward run failed.")
        raise typer.Exit(1) from exc

    directory = output_directory(run_config)
    metadata = [
        "normalisation = min-max per map; a constant map is written as all zeros",
        "batch_index = 0",
    ]
    for module, node in ATTENTION_MAPS.items():
        if not getattr(attention, module):
            logger.warning(f"Skipping '{module}', which is disabled.")
            continue
        values_2d = values[node][0, 0]
        path = directory / f"{module}_attn.pgm"
        try:
            write_pgm(path, to_graymap(values_2d))
        except ContextPyramidError as exc:
            logger.critical(f"Could not write [green]{path}[/].")
            raise typer.Exit(1) from exc
        logger.info(f"Wrote {values_2d.shape[1]}x{values_2d.shape[0]} map [green]{path}[/].")
        metadata.extend(
            [
                f"{module}.file = {path.name}",
                f"{module}.height = {values_2d.shape[0]}",
                f"{module}.width = {values_2d.shape[1]}",
                f"{module}.min = {float(np.min(values_2d))!r}",
                f"{module}.max = {float(np.max(values_2d))!r}",
                f"{module}.constant = {str(bool(np.ptp(values_2d) == 0)).lower()}",
            ]
        )
    write_lines(directory / "attention.txt", metadata)
