import math

import typer

from tetrageo.cli.output import console, csv_text, exit_on_error, key_value_table
from tetrageo.enums import Command, OutputFormat
from tetrageo.exceptions import DomainError
from tetrageo.geometry.tetrahedron import TetraParams, circumradius, distance_bounds
from tetrageo.parsers.angle_parser import parse_angle
from tetrageo.schema.dto.run_config import RunConfig
from tetrageo.schema.dto.tetra_info import TetraInfo

INFO_COLUMNS = ("a", "h", "d_trig", "d_log", "circumradius")


def tetra_info(alpha: float) -> TetraInfo:
    bounds = distance_bounds(TetraParams(alpha))
    return TetraInfo(
        alpha=alpha,
        a=bounds.a,
        h=bounds.h,
        d_trig=bounds.d_trig,
        d_log=bounds.d_log,
        circumradius=circumradius(alpha),
    )


def command(
    alpha: str = typer.Option(..., "--alpha", help='Face angle, e.g. "pi/6" or 0.5'),
    output_format: OutputFormat = typer.Option(OutputFormat.TABLE, "--format"),
):
    """Edge length, altitude, vertex-distance bounds and Klein circumradius."""
    with exit_on_error():
        config = RunConfig(command=Command.INFO, alpha=parse_angle(alpha), output_format=output_format)
        if config.output_format == OutputFormat.SVG:
            raise DomainError("info has no svg output")
        info = tetra_info(config.alpha)

        if config.output_format == OutputFormat.JSON:
            typer.echo(info.model_dump_json(indent=2, include=set(INFO_COLUMNS)))
        elif config.output_format == OutputFormat.CSV:
            data = info.model_dump()
            typer.echo(csv_text(INFO_COLUMNS, [[data[key] for key in INFO_COLUMNS]]), nl=False)
        else:
            data = info.model_dump()
            console.print(
                key_value_table(
                    f"alpha = {config.alpha:.12g} ({config.alpha / math.pi:.6g} pi)",
                    {key: data[key] for key in INFO_COLUMNS},
                )
            )
