"""Shared console, error mapping and writers for the commands."""

from __future__ import annotations

import csv
import io
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Sequence

import typer
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.table import Table

from tetrageo.enums import ExitCode
from tetrageo.exceptions import DomainError, InvariantViolation, VertexHit
from tetrageo.logging import get_logger

logger = get_logger(__name__)

console = Console()
err_console = Console(stderr=True)


def _report(message: str) -> None:
    err_console.print(f"error: {message}", markup=False, highlight=False, soft_wrap=True)


@contextmanager
def exit_on_error() -> Iterator[None]:
    try:
        yield
    except ValidationError as exc:
        _report("; ".join(error["msg"] for error in exc.errors()))
        raise typer.Exit(code=ExitCode.VALIDATION_ERROR)
    except DomainError as exc:
        _report(str(exc))
        raise typer.Exit(code=ExitCode.VALIDATION_ERROR)
    except (InvariantViolation, VertexHit) as exc:
        logger.error(f"Invariant failure: {exc}")
        _report(f"{type(exc).__name__}: {exc}")
        raise typer.Exit(code=ExitCode.INVARIANT_FAILURE)


def model_table(title: str, rows: Sequence[BaseModel], columns: Sequence[str]) -> Table:
    table = Table(title=title)
    for column in columns:
        table.add_column(column, justify="right")
    for row in rows:
        data = row.model_dump()
        table.add_row(*(_cell(data[column]) for column in columns))
    return table


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def emit(text: str, output: Path | None) -> None:
    """Write `text` to `output`, or to stdout when no path is given."""
    if output is None:
        typer.echo(text, nl=not text.endswith("\n"))
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text)
    logger.info(f"Wrote {output}")


def key_value_table(title: str, data: dict) -> Table:
    table = Table(title=title)
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for key, value in data.items():
        table.add_row(key, _cell(value))
    return table
