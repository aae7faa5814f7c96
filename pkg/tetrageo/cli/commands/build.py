from fractions import Fraction
from pathlib import Path
from typing import Optional

import typer

from tetrageo.cli.output import console, exit_on_error
from tetrageo.config import get_settings
from tetrageo.dependencies import get_geodesic_service, get_renderer
from tetrageo.enums import Command, Projection
from tetrageo.geometry.tetrahedron import edge_name, face_labels, vertex_name
from tetrageo.geometry.unfolding import midpoint_sequence, pair_counts
from tetrageo.parsers.angle_parser import parse_angle
from tetrageo.schema.dto.geodesic_path import CrossingExport, CrossingSeqExport, GeodesicPathExport
from tetrageo.schema.dto.run_config import RunConfig
from tetrageo.services.geodesic_service import GeodesicPath, GeodesicService, GeodesicType


def face_name(face: int) -> str:
    return "".join(vertex_name(label) for label in face_labels(face))


def _fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def tiling_export(gtype: GeodesicType) -> CrossingSeqExport:
    seq, _ = midpoint_sequence(gtype.p, gtype.q)
    return CrossingSeqExport(
        p=seq.p,
        q=seq.q,
        mu=_fraction(seq.mu),
        family=seq.family.value,
        edges=[edge_name(edge) for edge in seq.edges()],
        t=[_fraction(value) for value in seq.params()],
    )


def path_export(service: GeodesicService, path: GeodesicPath) -> GeodesicPathExport:
    return GeodesicPathExport(
        alpha=path.alpha,
        p=path.type.p,
        q=path.type.q,
        length=path.length,
        crossing_count=len(path.crossings),
        pair_counts=list(pair_counts(path.edges())),
        catching=list(path.catching),
        vertex_clearance=service.vertex_clearance(path),
        refraction_defect=path.refraction_defect,
        closure_defect=path.closure_defect,
        crossings=[
            CrossingExport(
                index=index,
                edge=edge_name(crossing.edge),
                t=crossing.t,
                angle=crossing.angle,
                face=face_name(path.faces[index]),
            )
            for index, crossing in enumerate(path.crossings)
        ],
        tiling=tiling_export(path.type),
    )


def command(
    alpha: str = typer.Option(..., "--alpha"),
    p: int = typer.Option(..., "--p"),
    q: int = typer.Option(..., "--q"),
    output_dir: Optional[Path] = typer.Option(None, "--out", help="Directory for the JSON and SVG files"),
    projection: Projection = typer.Option(Projection.POINCARE, "--projection"),
    svg: bool = typer.Option(True, "--svg/--no-svg"),
):
    """Build the simple closed geodesic of type (p, q) and write its JSON and SVG."""
    with exit_on_error():
        settings = get_settings()
        config = RunConfig(
            command=Command.BUILD,
            alpha=parse_angle(alpha),
            p=p,
            q=q,
            output=output_dir or settings.output_dir,
            projection=projection,
        )
        service = get_geodesic_service(config.alpha, settings)
        path = service.build_geodesic(GeodesicType(config.p, config.q))
        export = path_export(service, path)
        picture = None
        if svg:
            renderer = get_renderer(config.projection)
            picture = renderer.render(
                service.development_for(path),
                title=f"type ({config.p},{config.q}) at alpha={config.alpha:.6g}",
            )

        # everything is computed before anything is written
        config.output.mkdir(parents=True, exist_ok=True)
        stem = config.output / f"geodesic_p{config.p}_q{config.q}"
        stem.with_suffix(".json").write_text(export.model_dump_json(indent=2) + "\n")
        if picture is not None:
            stem.with_suffix(".svg").write_text(picture)

        console.print(
            f"type ({config.p},{config.q}): {export.crossing_count} crossings, "
            f"length {export.length:.12g}, closure defect {export.closure_defect:.2e}",
            highlight=False,
        )
