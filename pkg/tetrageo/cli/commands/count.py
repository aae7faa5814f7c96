from pathlib import Path
from typing import Optional

import typer
from pydantic import TypeAdapter

from tetrageo.cli.output import console, csv_text, emit, exit_on_error, model_table
from tetrageo.config import get_settings
from tetrageo.dependencies import get_counting_service
from tetrageo.enums import Command, OutputFormat
from tetrageo.exceptions import DomainError
from tetrageo.parsers.angle_parser import parse_angle
from tetrageo.parsers.length_parser import parse_lengths
from tetrageo.schema.dto.count_row import CSV_HEADER, CountRow
from tetrageo.schema.dto.run_config import RunConfig

_rows_adapter = TypeAdapter(list[CountRow])


def command(
    alpha: str = typer.Option(..., "--alpha"),
    lengths: Optional[str] = typer.Option(None, "--L", help="Comma-separated length bounds"),
    geom: Optional[str] = typer.Option(None, "--geom", help="START:STOP:COUNT geometric grid"),
    output_format: OutputFormat = typer.Option(OutputFormat.CSV, "--format"),
    output: Optional[Path] = typer.Option(None, "--output", "-o"),
    threads: Optional[int] = typer.Option(None, "--threads"),
):
    """Count simple closed geodesics of length at most L, one row per L."""
    with exit_on_error():
        settings = get_settings()
        config = RunConfig(
            command=Command.COUNT,
            alpha=parse_angle(alpha),
            lengths=parse_lengths(lengths, geom=geom),
            output_format=output_format,
            output=output,
            threads=threads or settings.threads,
        )
        if config.output_format == OutputFormat.SVG:
            raise DomainError("count has no svg output")
        service = get_counting_service(config.alpha, threads=config.threads, settings=settings)
        rows = service.count_table(config.lengths)

        if config.output_format == OutputFormat.CSV:
            emit(csv_text(CSV_HEADER, [row.csv_values() for row in rows]), config.output)
        elif config.output_format == OutputFormat.JSON:
            emit(_rows_adapter.dump_json(rows, indent=2).decode() + "\n", config.output)
        else:
            console.print(model_table(f"alpha = {config.alpha:.12g}", rows, CSV_HEADER))
