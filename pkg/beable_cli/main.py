"""
Main CLI application for the Bell lattice beables experiments.
"""

import logging
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from beable_sdk.exceptions import BeableError

import beable_cli.commands.experiments  # noqa: F401  registers the experiments
from beable_cli.commands.config import app as config_app
from beable_cli.core.config import CLIConfig, apply_overrides, load_run_config, set_config
from beable_cli.core.output import debug, error, format_check, format_duration, info, success, warning
from beable_cli.core.registry import Experiment, get_registry
from beable_cli.core.runner import EXIT_ERROR, EXIT_SUCCESS, run_directory, run_experiment

app = typer.Typer(
    name="beablectl",
    help="Bell lattice beables - reproducible experiment runner",
    add_completion=False,
)

console = Console()

app.add_typer(config_app, name="config", help="Configuration commands")


@app.command()
def version():
    """Show version information."""
    from beable_cli import __version__
    console.print(f"beablectl v{__version__}")


@app.command("list")
def list_experiments():
    """List the registered experiments."""
    table = Table(title="Experiments")
    table.add_column("Name", style="cyan", no_wrap=True)
    table.add_column("Description", style="green")
    for entry in get_registry():
        table.add_row(entry.name, entry.help)
    console.print(table)


def _report(code: int, manifest) -> None:
    table = Table(title=f"{manifest.experiment} checks")
    table.add_column("Check", style="cyan")
    table.add_column("Status")
    table.add_column("Value", style="yellow")
    table.add_column("Threshold", style="yellow")
    for check in manifest.checks:
        table.add_row(
            check.name,
            format_check(check.status),
            "" if check.value is None else f"{check.value:.6g}",
            "" if check.threshold is None else f"{check.comparison} {check.threshold:.6g}",
        )
    if manifest.checks:
        console.print(table)

    elapsed = format_duration(manifest.wall_clock_seconds or 0.0)
    if code == EXIT_SUCCESS:
        success(f"{manifest.experiment} finished in {elapsed}")
    elif code == EXIT_ERROR:
        record = manifest.error or {}
        error(f"{record.get('check')}: {record.get('error')}: {record.get('message')}")
    else:
        failed = ", ".join(c.name for c in manifest.failed_checks)
        warning(f"{manifest.experiment} failed check(s): {failed}")


def _make_command(entry: Experiment):
    def command(
        config_file: Optional[Path] = typer.Option(None, "--config", help="Path to a JSON run configuration"),
        seed: Optional[int] = typer.Option(None, "--seed", help="Master seed"),
        out_dir: Optional[Path] = typer.Option(None, "--out-dir", help="Output directory"),
        threads: Optional[int] = typer.Option(None, "--threads", help="Worker threads"),
    ):
        try:
            config = load_run_config(config_file, entry.name)
            config = apply_overrides(config, seed=seed, output_dir=out_dir, threads=threads)
        except BeableError as e:
            error(e.message)
            for item in e.details.get("errors", []):
                error(f"  {item['field']}: {item['message']}")
            raise typer.Exit(EXIT_ERROR)

        debug(f"Resolved configuration: {config.model_dump_json(exclude_none=True)}")
        info(f"Running {entry.name} (seed {config.seed}) into {run_directory(config, entry.name)}")
        code, manifest = run_experiment(entry.name, config)
        _report(code, manifest)
        raise typer.Exit(code)

    command.__doc__ = entry.help
    return command


for _entry in get_registry():
    app.command(name=_entry.name, help=_entry.help)(_make_command(_entry))


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", help="Enable verbose output"),
    output_format: str = typer.Option("table", "--format", help="Output format (table, json, yaml)"),
):
    """
    Bell lattice beables - reproducible experiment runner.

    Each experiment reads an optional JSON configuration, writes CSV tables,
    schema.json and manifest.json, and exits 0 on success, 2 when a physics
    check fails and 1 on errors.
    """
    set_config(CLIConfig(verbose=verbose, output_format=output_format))
    if verbose:
        logging.basicConfig(
            level=logging.DEBUG,
            format="%(message)s",
            handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True)],
            force=True,
        )


if __name__ == "__main__":
    app()
