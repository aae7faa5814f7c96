from pathlib import Path
from typing import Optional

import typer

from tetrageo.cli.output import emit, exit_on_error
from tetrageo.enums import Command
from tetrageo.geometry.tetrahedron import TetraParams, klein_embedding
from tetrageo.parsers.angle_parser import parse_angle
from tetrageo.schema.dto.run_config import RunConfig
from tetrageo.schema.dto.tetra_info import KleinTetrahedronExport


def _digits(value: float) -> float:
    return float(f"{value:.15g}")


def command(
    alpha: str = typer.Option(..., "--alpha"),
    output: Optional[Path] = typer.Option(None, "--output", "-o"),
):
    """Klein-ball coordinates of the tetrahedron vertices as JSON."""
    with exit_on_error():
        config = RunConfig(command=Command.EXPORT_TETRA, alpha=parse_angle(alpha), output=output)
        embedding = klein_embedding(TetraParams(config.alpha))
        export = KleinTetrahedronExport(
            alpha=_digits(embedding.alpha),
            edge_length=_digits(embedding.edge_length),
            circumradius=_digits(embedding.circumradius),
            vertices=[[_digits(float(x)) for x in vertex] for vertex in embedding.vertices],
        )
        emit(export.model_dump_json(indent=2) + "\n", config.output)
