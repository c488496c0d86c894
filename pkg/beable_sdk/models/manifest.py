from __future__ import annotations

from datetime import datetime, timezone
from typing import Any, Dict, List, Optional
from uuid import uuid4

from pydantic import BaseModel, Field


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class CheckResult(BaseModel):
    """Outcome of one physics check inside an experiment run."""

    name: str
    passed: Optional[bool]  # None when the check is undefined for the input
    value: Optional[float] = None
    threshold: Optional[float] = None
    comparison: str = "<="
    message: Optional[str] = None

    @property
    def status(self) -> str:
        if self.passed is None:
            return "UNDEFINED"
        return "PASS" if self.passed else "FAIL"


class FileRecord(BaseModel):
    """Output file inventory entry."""

    path: str
    sha256: str
    size: int


class RunManifest(BaseModel):
    """Canonical record of one experiment run.

    Written once, atomically, at the end of the run. Everything except the
    timestamps and wall clock is a pure function of the config and seed.
    """

    run_id: str = Field(default_factory=lambda: str(uuid4()))
    experiment: str
    version: str
    config: Dict[str, Any] = Field(default_factory=dict)
    started_at: datetime = Field(default_factory=_utcnow)
    finished_at: Optional[datetime] = None
    wall_clock_seconds: Optional[float] = None
    status: str = "success"  # success | fail | error
    checks: List[CheckResult] = Field(default_factory=list)
    files: List[FileRecord] = Field(default_factory=list)
    diagnostics: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[Dict[str, Any]] = None

    @property
    def failed_checks(self) -> List[CheckResult]:
        return [c for c in self.checks if c.passed is False]


def build_output_name(experiment: str, stem: str, suffix: str = "csv") -> str:
    """Output file name for an experiment artifact.

    Format: <experiment>_<stem>.<suffix>
    """
    experiment_norm = experiment.replace("-", "_")
    return f"{experiment_norm}_{stem}.{suffix}"
