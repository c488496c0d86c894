"""
Experiment runner: executes one registered experiment inside a tracing span
and records its tables, checks and manifest.
"""

import logging
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from opentelemetry import trace

from beable_sdk.exceptions import BeableError
from beable_sdk.models.manifest import CheckResult, RunManifest, build_output_name

from beable_cli import __version__
from beable_cli.core.config import RunConfig
from beable_cli.core.manifest import atomic_write_text, file_record, write_manifest, write_schema
from beable_cli.core.output import render_csv
from beable_cli.core.registry import get_registry

logger = logging.getLogger(__name__)
tracer = trace.get_tracer(__name__)

EXIT_SUCCESS = 0
EXIT_ERROR = 1
EXIT_CHECK_FAILED = 2

INTERNAL_ERROR = "INTERNAL_ERROR"


class Column(NamedTuple):
    """Documented CSV column."""

    name: str
    description: str
    unit: str = ""


class RunContext:
    """Collects the artifacts and checks of one run."""

    def __init__(self, experiment: str, config: RunConfig, run_dir: Path):
        self.experiment = experiment
        self.config = config
        self.run_dir = Path(run_dir)
        self.checks: List[CheckResult] = []
        self.files: List[Path] = []
        self.schema: List[Dict[str, Any]] = []
        self.diagnostics: Dict[str, Any] = {}

    def write_table(self, stem: str, columns: Sequence[Column], rows: Iterable[Sequence[Any]]) -> Path:
        """Write ``<experiment>_<stem>.csv`` and document its columns."""
        name = build_output_name(self.experiment, stem)
        path = atomic_write_text(self.run_dir / name, render_csv([c.name for c in columns], rows))
        self.files.append(path)
        self.schema.extend(
            {"file": name, "column": c.name, "description": c.description, "unit": c.unit} for c in columns
        )
        logger.debug(f"Wrote {path}")
        return path

    def check(
        self,
        name: str,
        passed: Optional[bool],
        value: Optional[float] = None,
        threshold: Optional[float] = None,
        comparison: str = "<=",
        message: Optional[str] = None,
    ) -> CheckResult:
        result = CheckResult(
            name=name,
            passed=None if passed is None else bool(passed),
            value=None if value is None else float(value),
            threshold=None if threshold is None else float(threshold),
            comparison=comparison,
            message=message,
        )
        self.checks.append(result)
        logger.info(f"Check {name}: {result.status} (value={value}, threshold={threshold})")
        return result

    def record(self, **diagnostics: Any) -> None:
        self.diagnostics.update(diagnostics)


def run_directory(config: RunConfig, experiment: str) -> Path:
    return Path(config.output_dir) / experiment.replace("-", "_")


def run_experiment(name: str, config: RunConfig) -> Tuple[int, RunManifest]:
    """Run experiment ``name`` and write its outputs.

    Returns the exit code (0 success, 2 a check failed, 1 an error) and the
    manifest that was written.
    """
    entry = get_registry().get(name)
    run_dir = run_directory(config, name)
    context = RunContext(name, config, run_dir)
    manifest = RunManifest(
        experiment=name,
        version=__version__,
        config=config.model_dump(mode="json"),
    )
    started = time.perf_counter()

    with tracer.start_as_current_span(
        f"experiment.{name}",
        attributes={
            "experiment.seed": config.seed,
            "experiment.sites": config.lattice.sites,
            "experiment.quanta": config.lattice.quanta,
        },
    ) as span:
        try:
            entry(config, context)
            manifest.status = "fail" if any(c.passed is False for c in context.checks) else "success"
        except BeableError as e:
            e.check = e.check or name
            manifest.status = "error"
            manifest.error = e.to_record()
            span.record_exception(e)
            logger.error(f"Experiment {name} failed: {e}")
        except Exception as e:
            manifest.status = "error"
            manifest.error = {
                "error": INTERNAL_ERROR,
                "message": str(e) or type(e).__name__,
                "check": name,
                "details": {"type": type(e).__name__},
            }
            span.record_exception(e)
            logger.exception(f"Experiment {name} raised an unexpected error")
        span.set_attribute("experiment.status", manifest.status)

    manifest.checks = context.checks
    manifest.diagnostics = context.diagnostics
    schema_path = write_schema(context.schema, run_dir)
    manifest.files = [file_record(p, run_dir) for p in [*context.files, schema_path]]
    manifest.finished_at = datetime.now(timezone.utc)
    manifest.wall_clock_seconds = time.perf_counter() - started
    write_manifest(manifest, run_dir)

    if manifest.status == "error":
        return EXIT_ERROR, manifest
    if manifest.status == "fail":
        return EXIT_CHECK_FAILED, manifest
    return EXIT_SUCCESS, manifest
