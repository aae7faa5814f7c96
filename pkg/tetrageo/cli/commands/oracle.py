from typing import Optional

import typer

from tetrageo.cli.output import console, exit_on_error, model_table
from tetrageo.config import get_settings
from tetrageo.dependencies import get_counting_service, get_geodesic_service, get_oracle
from tetrageo.enums import Command, ExitCode, OutputFormat
from tetrageo.exceptions import DomainError
from tetrageo.geometry.tetrahedron import edge_name
from tetrageo.logging import get_logger
from tetrageo.parsers.angle_parser import parse_angle
from tetrageo.schema.dto.oracle_report import FoundGeodesicExport, OracleReport
from tetrageo.schema.dto.run_config import RunConfig
from tetrageo.services.counting_service import canonical_types, max_pq_bound
from tetrageo.services.geodesic_service import GeodesicService
from tetrageo.services.shooting_oracle import FoundGeodesic

logger = get_logger(__name__)

LENGTH_AGREEMENT = 1e-8


def cross_identify(
    found: list[FoundGeodesic], service: GeodesicService
) -> list[FoundGeodesicExport]:
    """Match each found geodesic against the built geodesic of its type."""
    built: dict = {}
    exports = []
    for geodesic in found:
        built_length = None
        label = "unidentified"
        if geodesic.type is not None:
            if geodesic.type not in built:
                built[geodesic.type] = service.geodesic_length(geodesic.type)
            built_length = built[geodesic.type]
            if abs(built_length - geodesic.length) < LENGTH_AGREEMENT:
                label = str(geodesic.type)
            else:
                logger.warning(
                    f"Found {geodesic.type} of length {geodesic.length:.12g} "
                    f"against built {built_length:.12g}"
                )
        exports.append(
            FoundGeodesicExport(
                type=label,
                length=geodesic.length,
                closure_defect=geodesic.closure_defect,
                crossing_count=len(geodesic.word),
                start_edge=edge_name(geodesic.start_edge),
                t0=geodesic.t0,
                theta=geodesic.theta,
                built_length=built_length,
            )
        )
    return exports


def expected_count(alpha: float, l_max: float, threads: int) -> int:
    """Three geodesics per canonical type whose built length is at most l_max."""
    counting = get_counting_service(alpha, threads=threads)
    types = canonical_types(max_pq_bound(l_max, alpha))
    lengths = counting.type_lengths(types)
    return 3 * sum(1 for length in lengths if length <= l_max)


def command(
    alpha: str = typer.Option(..., "--alpha"),
    l_max: float = typer.Option(..., "--L-max"),
    grid: Optional[int] = typer.Option(None, "--grid", help="Grid size per axis over (t0, theta)"),
    output_format: OutputFormat = typer.Option(OutputFormat.TABLE, "--format"),
    threads: Optional[int] = typer.Option(None, "--threads"),
):
    """Search for closed geodesics by shooting and compare them with the built ones."""
    with exit_on_error():
        settings = get_settings()
        config = RunConfig(
            command=Command.ORACLE,
            alpha=parse_angle(alpha),
            lengths=[l_max],
            output_format=output_format,
            grid=grid or settings.oracle_grid,
            threads=threads or settings.threads,
        )
        if config.output_format in (OutputFormat.SVG, OutputFormat.CSV):
            raise DomainError(f"oracle has no {config.output_format.value} output")

        oracle = get_oracle(config.alpha, grid=config.grid, threads=config.threads, settings=settings)
        found = oracle.find_closed(l_max)
        exports = cross_identify(found, get_geodesic_service(config.alpha, settings))
        expected = expected_count(config.alpha, l_max, config.threads)
        identified = sum(1 for export in exports if export.type != "unidentified")
        report = OracleReport(
            alpha=config.alpha,
            L_max=l_max,
            grid=config.grid,
            found=len(exports),
            identified=identified,
            expected=expected,
            complete=len(exports) >= expected,
            geodesics=exports,
        )

        if config.output_format == OutputFormat.JSON:
            typer.echo(report.model_dump_json(indent=2))
        else:
            if exports:
                console.print(
                    model_table(
                        f"alpha = {config.alpha:.12g}, L_max = {l_max:.6g}",
                        exports,
                        ("type", "length", "closure_defect", "crossing_count", "start_edge"),
                    )
                )
            console.print(report.summary(), highlight=False)

    if report.identified < report.found:
        raise typer.Exit(code=ExitCode.INVARIANT_FAILURE)
