"""Complexity report for the context and attention modules"""

import typer

from context_pyramid import console
from context_pyramid.analysis import (
    REFERENCE_PARAMETER_DELTA,
    RfSpec,
    cem_rf_growth,
    complexity_report,
    count_params,
)
from context_pyramid.attention import am_build
from context_pyramid.cem import cem_build, channel_plan, dense_parameter_delta
from context_pyramid.exceptions import ContextPyramidError
from context_pyramid.logging import get_logger
from context_pyramid.pyramid.backbone import MAX_STRIDE

from .common import (
    ConfigOption,
    OutOption,
    PrecisionOption,
    SeedOption,
    load_run_config,
    output_directory,
    write_lines,
)


def report(
    config: ConfigOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    precision: PrecisionOption = None,
) -> None:
    """Print parameter, MAC and receptive-field figures for CEM and attention"""
    logger = get_logger()
    run_config = load_run_config(config, seed, out, precision)
    cem_config = run_config.cem
    _, _, height, width = run_config.input.shape
    f5_size = (height // MAX_STRIDE, width // MAX_STRIDE)
    entering = RfSpec(jump=(MAX_STRIDE, MAX_STRIDE))

    try:
        cem_graph = cem_build(cem_config)
        am_graph = am_build(
            run_config.attention, cem_config.out_channels, cem_config.in_channels
        )
        combined = complexity_report(cem_graph, f5_size, initial=entering).merge(
            complexity_report(am_graph, f5_size, initial=entering)
        )
        cem_params, am_params = count_params(cem_graph), count_params(am_graph)
        dense_delta = count_params(
            cem_build(cem_config.model_copy(update={"use_dense": True}))
        ) - count_params(cem_build(cem_config.model_copy(update={"use_dense": False})))
    except ContextPyramidError as exc:
        logger.critical("Could not build the graphs to report on.")
        raise typer.Exit(1) from exc

    console.tabulate(
        ["Node", "Kind", "Output", "Params", "MACs", "RF"],
        [
            [
                node.name,
                node.kind.value,
                "x".join(str(size) for size in node.output_shape[1:]),
                f"{node.params:,}",
                f"{node.macs:,}",
                (
                    "global"
                    if node.receptive_field and node.receptive_field.is_global
                    else str(node.receptive_field.rf[0]) if node.receptive_field else ""
                ),
            ]
            for node in combined.nodes
        ],
        title=f"CEM and attention at F5 size {f5_size[0]}x{f5_size[1]}",
        numeric={3, 4, 5},
    )

    added = cem_params + am_params
    deviation = 100.0 * (added - REFERENCE_PARAMETER_DELTA) / REFERENCE_PARAMETER_DELTA
    growth = cem_rf_growth(cem_config.rates, MAX_STRIDE, dense=cem_config.use_dense)
    summary = [
        f"cem.paths = {cem_config.paths}",
        f"cem.rates = {','.join(str(rate) for rate in cem_config.rates)}",
        f"cem.channel_plan = {','.join(str(w) for w in channel_plan(cem_config))}",
        f"cem.params = {cem_params}",
        f"am.params = {am_params}",
        f"added.params = {added}",
        f"added.macs = {combined.total_macs}",
        f"reference.params = {REFERENCE_PARAMETER_DELTA}",
        f"reference.deviation_percent = {deviation:.2f}",
        f"dense.params_delta = {dense_delta}",
        f"dense.params_delta_predicted = {dense_parameter_delta(cem_config)}",
        f"cem.rf_growth = {growth}",
    ]
    console.print(
        f"Added parameters: [bold]{added:,}[/] ({deviation:+.2f}% against {REFERENCE_PARAMETER_DELTA:,})"
    )
    console.print(f"CEM receptive-field growth over F5: [bold]{growth}[/] pixels")
    for line in summary:
        console.print(line)
    write_lines(
        output_directory(run_config) / "report.txt",
        summary + combined.to_key_values(prefix="node."),
    )
