from typing import Optional

import typer

from tetrageo.cli.commands.build import command as BuildCommand
from tetrageo.cli.commands.count import command as CountCommand
from tetrageo.cli.commands.export_tetra import command as ExportTetraCommand
from tetrageo.cli.commands.info import command as InfoCommand
from tetrageo.cli.commands.oracle import command as OracleCommand
from tetrageo.config import get_settings
from tetrageo.enums import Command
from tetrageo.logging import setup_logging

app = typer.Typer(name="tetrageo", no_args_is_help=True, add_completion=False)
app.command(name=Command.INFO.value)(InfoCommand)
app.command(name=Command.BUILD.value)(BuildCommand)
app.command(name=Command.COUNT.value)(CountCommand)
app.command(name=Command.ORACLE.value)(OracleCommand)
app.command(name=Command.EXPORT_TETRA.value)(ExportTetraCommand)


@app.callback()
def main(log_level: Optional[str] = typer.Option(None, "--log-level")):
    """Simple closed geodesics on regular hyperbolic tetrahedra."""
    settings = get_settings()
    setup_logging(level=log_level or settings.log_level, log_file=settings.log_file)


if __name__ == "__main__":
    app()
