"""
Configuration commands for the beablectl CLI.
"""

from pathlib import Path
from typing import Optional

import typer

from beable_sdk.exceptions import BeableError

from beable_cli.core.config import EXPERIMENT_DEFAULTS, build_run_config, get_config, load_run_config
from beable_cli.core.output import error, print_output, success

app = typer.Typer(help="Configuration commands")


@app.command()
def show(
    experiment: Optional[str] = typer.Option(None, "--experiment", help="Show the defaults of this experiment"),
    format: str = typer.Option(None, "--format", help="Output format (overrides the global --format)"),
):
    """Show the effective default configuration."""
    display_format = format or get_config().output_format
    if display_format == "table":
        display_format = "json"
    try:
        config = build_run_config(experiment)
    except BeableError as e:
        error(str(e))
        error(f"Known experiments: {', '.join(sorted(EXPERIMENT_DEFAULTS))}")
        raise typer.Exit(1)

    print_output(config.model_dump(mode="json"), format_type=display_format, title="Configuration")


@app.command()
def validate(
    path: Path = typer.Argument(..., help="Path to a JSON run configuration"),
    experiment: Optional[str] = typer.Option(None, "--experiment", help="Validate on top of this experiment's defaults"),
):
    """Validate a configuration file and report field-level errors."""
    try:
        load_run_config(path, experiment)
    except BeableError as e:
        error(e.message)
        for item in e.details.get("errors", []):
            error(f"  {item['field']}: {item['message']}")
        raise typer.Exit(1)

    success(f"Configuration {path} is valid")
