"""
Configuration management for the beablectl CLI.

Two layers live here: ``CLIConfig`` holds the presentation settings of one
invocation (verbosity, output format), and ``RunConfig`` is the validated
experiment configuration read from a JSON file.
"""

import copy
import json
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from beable_sdk.exceptions import ValidationError
from beable_sdk.models.types import EvolutionConfig, LatticeParams, OrbitalSpec

OUT_DIR_ENV = "BEABLE_OUT_DIR"
DEFAULT_OUT_DIR = "runs"


class CLIConfig(BaseModel):
    """Presentation settings of the running CLI."""

    verbose: bool = Field(default=False, description="Verbose output")
    output_format: str = Field(default="table", description="Output format (table, json, yaml)")


class TrajectoryConfig(BaseModel):
    """Stochastic jump ensemble settings."""

    model_config = ConfigDict(extra="forbid")

    count: int = Field(default=20000, ge=1, description="Number of trajectories")
    dt: float = Field(default=1e-3, gt=0, description="Substep of the jump sampler")
    record_every: int = Field(default=100, ge=1, description="Record every n-th substep")
    checkpoints: List[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0])
    z_threshold: float = Field(default=3.5, gt=0)
    z_exceed_limit: float = Field(
        default=0.01, gt=0, le=1, description="Fraction of configurations allowed beyond the z threshold"
    )
    tv_tolerance: float = Field(default=0.03, gt=0, description="Largest total variation distance accepted")

    @field_validator("checkpoints")
    @classmethod
    def _non_negative(cls, value: List[float]) -> List[float]:
        if any(t < 0 for t in value):
            raise ValueError("checkpoints must be non-negative times")
        return sorted(value)


class MasterEquationConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dt: float = Field(default=1e-3, gt=0)
    report_every: int = Field(default=100, ge=1)
    tolerance: float = Field(default=1e-6, gt=0, description="Largest |P - |Ψ|²| accepted")
    quench: float = Field(
        default=0.0, ge=0, le=1, description="Weight of the uniform distribution mixed into P₀; 0 starts at |Ψ₀|²"
    )


class ConvergenceConfig(BaseModel):
    """Continuum-limit study: fixed physical packet and box, shrinking δ."""

    model_config = ConfigDict(extra="forbid")

    resolutions: List[int] = Field(default_factory=lambda: [64, 128, 256])
    trials: int = Field(default=200, ge=1)
    horizon: float = Field(default=8.0, gt=0)
    box_length: float = Field(default=64.0, gt=0)
    mass: float = Field(default=0.0, ge=0)
    dt_fraction: float = Field(default=0.02, gt=0, le=1, description="Jump substep in units of δ")
    packet: OrbitalSpec = Field(default_factory=lambda: OrbitalSpec(center=26.0, width=4.0, momentum=0.5))
    partner: Optional[OrbitalSpec] = Field(
        default_factory=lambda: OrbitalSpec(center=38.0, width=4.0, momentum=-0.5),
        description="Second orbital superposed with packet for the one quantum; null for a single Gaussian",
    )

    @field_validator("resolutions")
    @classmethod
    def _even_resolutions(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("at least one resolution is required")
        if any(n <= 0 or n % 2 for n in value):
            raise ValueError(f"resolutions must be even positive site counts, got {value}")
        if len(set(value)) != len(value):
            raise ValueError(f"duplicate resolutions in {value}")
        return value

    @model_validator(mode="after")
    def _packet_resolved(self) -> "ConvergenceConfig":
        coarsest = self.box_length / min(self.resolutions)
        for orbital in (self.packet, self.partner):
            if orbital is not None and orbital.width < 2.0 * coarsest:
                raise ValueError(
                    f"packet width {orbital.width} is below 2δ = {2.0 * coarsest} at the coarsest resolution"
                )
        return self


class NonlocalityConfig(BaseModel):
    """Two overlapping counter-propagating orbitals on a periodic continuum grid."""

    model_config = ConfigDict(extra="forbid")

    chi: OrbitalSpec = Field(default_factory=lambda: OrbitalSpec(center=28.0, width=4.0, momentum=1.0))
    phi: OrbitalSpec = Field(default_factory=lambda: OrbitalSpec(center=36.0, width=4.0, momentum=-1.0))
    mass: float = Field(default=0.0, ge=0)
    points: int = Field(default=256, ge=8)
    length: float = Field(default=64.0, gt=0)
    origin: float = 0.0
    ratio_threshold: float = Field(default=0.05, gt=0, description="σ₂/σ₁ must exceed this for overlap")
    spread_factor: float = Field(default=10.0, gt=0, description="Velocity spread over the noise floor")
    disjoint_threshold: float = Field(default=1e-6, gt=0, description="σ₂/σ₁ ceiling for disjoint supports")


class CommutatorConfig(BaseModel):
    """Mode grid of the smeared density commutator; momenta in units of Δp = 2π/length."""

    model_config = ConfigDict(extra="forbid")

    points: int = Field(default=8, ge=2)
    length: float = Field(default=8.0, gt=0)
    mass: float = Field(default=1.0, gt=0)
    electrons: List[int] = Field(default_factory=lambda: [1, 2])
    positrons: List[int] = Field(default_factory=lambda: [1, 2])
    smearing_center: float = 4.0
    smearing_width: float = Field(default=1.0, gt=0)


class VelocityTableConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    momenta: List[float] = Field(
        default_factory=lambda: [-1.2, -0.9, -0.6, -0.3, 0.0, 0.2, 0.5, 0.8, 1.1, 1.4]
    )
    site: int = Field(default=0, ge=0)
    tolerance: float = Field(default=1e-10, gt=0)
    cancellation_threshold: float = Field(default=0.1, gt=0)


class RunConfig(BaseModel):
    """Validated configuration of one experiment run.

    Every field has a default; unknown keys are rejected at every level.
    """

    model_config = ConfigDict(extra="forbid")

    experiment: Optional[str] = None
    seed: int = Field(default=1234, ge=0)
    threads: int = Field(default=1, ge=1)
    output_dir: Path = Field(default_factory=lambda: Path(os.getenv(OUT_DIR_ENV, DEFAULT_OUT_DIR)))
    horizon: float = Field(default=5.0, ge=0)
    samples: int = Field(default=101, ge=1, description="Recorded frames of the evolve experiment")
    lattice: LatticeParams = Field(default_factory=LatticeParams)
    packets: List[OrbitalSpec] = Field(default_factory=lambda: [OrbitalSpec()])
    evolution: EvolutionConfig = Field(default_factory=EvolutionConfig)
    trajectories: TrajectoryConfig = Field(default_factory=TrajectoryConfig)
    master: MasterEquationConfig = Field(default_factory=MasterEquationConfig)
    convergence: ConvergenceConfig = Field(default_factory=ConvergenceConfig)
    nonlocality: NonlocalityConfig = Field(default_factory=NonlocalityConfig)
    commutator: CommutatorConfig = Field(default_factory=CommutatorConfig)
    velocity: VelocityTableConfig = Field(default_factory=VelocityTableConfig)

    @model_validator(mode="after")
    def _packets_match_lattice(self) -> "RunConfig":
        if len(self.packets) != self.lattice.quanta:
            raise ValueError(
                f"packets lists {len(self.packets)} orbital(s) but lattice.quanta is {self.lattice.quanta}"
            )
        for i, packet in enumerate(self.packets):
            if packet.width < 2.0 * self.lattice.spacing:
                raise ValueError(
                    f"packets[{i}].width {packet.width} is below 2·spacing = {2.0 * self.lattice.spacing}"
                )
        return self


_TWO_QUANTA = {
    "lattice": {"sites": 8, "spacing": 1.0, "mass": 0.5, "quanta": 2},
    "packets": [
        {"center": 2.0, "width": 2.0, "momentum": 0.5},
        {"center": 6.0, "width": 2.0, "momentum": -0.5},
    ],
}

_SIXTEEN_SITES = {
    "lattice": {"sites": 16, "spacing": 1.0, "mass": 0.5, "quanta": 1},
    "packets": [{"center": 8.0, "width": 3.0, "momentum": 0.5}],
    "horizon": 2.0,
}

EXPERIMENT_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "spectrum": {
        "lattice": {"sites": 32, "spacing": 1.0, "mass": 0.5, "quanta": 1},
        "packets": [{"center": 16.0, "width": 4.0}],
    },
    "doubling": {
        "lattice": {"sites": 32, "spacing": 1.0, "mass": 0.5, "quanta": 1},
        "packets": [{"center": 16.0, "width": 4.0}],
    },
    "evolve": {**_TWO_QUANTA, "horizon": 10.0},
    "trajectories": {**_SIXTEEN_SITES, "trajectories": {"count": 5, "record_every": 10}},
    "equivariance": dict(_SIXTEEN_SITES),
    "master-equation": {**_TWO_QUANTA, "horizon": 5.0},
    "continuum-convergence": {},
    "nonlocality": {},
    "commutator-check": {},
    "velocity-table": {
        "lattice": {"sites": 256, "spacing": 1.0, "mass": 0.5, "quanta": 1},
        "packets": [{"center": 128.0, "width": 20.0, "momentum": 0.5}],
    },
}


def merge_config(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive dict merge; lists and scalars in ``override`` replace those in ``base``."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def field_errors(exc: PydanticValidationError) -> List[Dict[str, str]]:
    """Flatten pydantic errors into (field, message) records with dotted JSON paths."""
    errors = []
    for err in exc.errors():
        location = ".".join(str(part) for part in err.get("loc", ())) or "<root>"
        errors.append({"field": location, "message": err.get("msg", "invalid value")})
    return errors


def build_run_config(experiment: Optional[str] = None, data: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Experiment defaults overlaid with ``data``, validated.

    Raises:
        ValidationError: with one entry per offending field in ``details["errors"]``
    """
    if experiment is not None and experiment not in EXPERIMENT_DEFAULTS:
        raise ValidationError(f"unknown experiment '{experiment}'", details={"known": sorted(EXPERIMENT_DEFAULTS)})
    raw = merge_config(EXPERIMENT_DEFAULTS.get(experiment or "", {}), data or {})
    if experiment is not None:
        raw["experiment"] = experiment
    try:
        return RunConfig.model_validate(raw)
    except PydanticValidationError as e:
        errors = field_errors(e)
        summary = "; ".join(f"{err['field']}: {err['message']}" for err in errors)
        raise ValidationError(f"invalid configuration: {summary}", check="config", details={"errors": errors}) from e


def load_run_config(path: Optional[Path], experiment: Optional[str] = None) -> RunConfig:
    """Read a JSON config file (or none) on top of the experiment defaults."""
    if path is None:
        return build_run_config(experiment)
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"config file {path} does not exist", check="config")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ValidationError(
            f"{path}: line {e.lineno}, column {e.colno}: {e.msg}",
            check="config",
            details={"line": e.lineno, "column": e.colno},
        ) from e
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: top level must be a JSON object", check="config")
    return build_run_config(experiment, data)


def apply_overrides(config: RunConfig, **overrides: Any) -> RunConfig:
    """Command-line flags on top of the file; ``None`` leaves the file value."""
    updates = {k: v for k, v in overrides.items() if v is not None}
    if not updates:
        return config
    try:
        return RunConfig.model_validate({**config.model_dump(), **updates})
    except PydanticValidationError as e:
        errors = field_errors(e)
        summary = "; ".join(f"{err['field']}: {err['message']}" for err in errors)
        raise ValidationError(f"invalid option: {summary}", check="config", details={"errors": errors}) from e


# Global configuration instance
_config: Optional[CLIConfig] = None


def get_config() -> CLIConfig:
    """Get the global CLI configuration instance."""
    global _config
    if _config is None:
        _config = CLIConfig()
    return _config


def set_config(config: CLIConfig) -> None:
    """Set the global CLI configuration instance."""
    global _config
    _config = config
