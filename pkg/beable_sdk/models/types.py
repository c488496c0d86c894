"""
Pydantic models for the Bell lattice beables SDK.
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Species(str, Enum):
    """Momentum-mode species of the 1+1D Dirac field."""

    ELECTRON = "electron"
    POSITRON = "positron"


class EnergySign(str, Enum):
    """Energy branch used for the spinor structure of a packet."""

    POSITIVE = "positive"
    NEGATIVE = "negative"


class IntegratorMethod(str, Enum):
    """Schrödinger integrator selection."""

    AUTO = "auto"
    EIGENDECOMPOSITION = "eigendecomposition"
    RK4 = "rk4"


class LatticeParams(BaseModel):
    """Staggered lattice with 2N sites, spacing δ, mass m, ω quanta and contact coupling g."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    sites: int = Field(default=8, description="Number of staggered sites 2N (even)")
    spacing: float = Field(default=1.0, gt=0, description="Lattice spacing δ")
    mass: float = Field(default=0.5, ge=0, description="Fermion mass m")
    quanta: int = Field(default=1, ge=0, description="Fermion number ω of the sector")
    coupling: float = Field(default=0.0, description="Contact coupling g")

    @field_validator("sites")
    @classmethod
    def _even_sites(cls, value: int) -> int:
        if value <= 0 or value % 2:
            raise ValueError(f"sites must be an even positive integer, got {value}")
        return value

    @model_validator(mode="after")
    def _quanta_in_range(self) -> "LatticeParams":
        if self.quanta > self.sites:
            raise ValueError(f"quanta must lie in [0, {self.sites}], got {self.quanta}")
        return self

    @property
    def cells(self) -> int:
        """Number N of two-site spinor cells."""
        return self.sites // 2

    @property
    def box_length(self) -> float:
        """Physical length 2N·δ of the periodic box."""
        return self.sites * self.spacing


class OrbitalSpec(BaseModel):
    """Single-quantum Gaussian orbital: centre x₀, width σ, momentum p₀ and energy branch."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    center: float = 4.0
    width: float = Field(default=2.0, gt=0)
    momentum: float = 0.5
    energy_sign: EnergySign = EnergySign.POSITIVE


class PacketSpec(BaseModel):
    """Initial pilot-state: one orbital per quantum, antisymmetrized."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    orbitals: List[OrbitalSpec] = Field(default_factory=lambda: [OrbitalSpec()])

    @classmethod
    def single(cls, center: float, width: float, momentum: float = 0.0,
               energy_sign: EnergySign = EnergySign.POSITIVE) -> "PacketSpec":
        return cls(orbitals=[OrbitalSpec(center=center, width=width, momentum=momentum, energy_sign=energy_sign)])


class EvolutionConfig(BaseModel):
    """Pilot-state integrator settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    method: IntegratorMethod = IntegratorMethod.AUTO
    dt: float = Field(default=1e-3, gt=0, description="rk4 substep")
    eigen_dimension_threshold: int = Field(default=4096, ge=1)
    max_step_radius: float = Field(default=0.1, gt=0, description="Bound on dt times spectral radius")
    drift_tolerance: float = Field(default=1e-8, gt=0, description="Norm drift allowed per unit time")


class DispersionPoint(BaseModel):
    """Lattice momentum and energy for one continuum momentum."""

    model_config = ConfigDict(frozen=True)

    p: float
    p_lat: float
    e_lat: float


class LevelMultiplicity(BaseModel):
    """How often one signed single-particle level occurs on each lattice discretization."""

    energy: float
    staggered: int
    naive: int


class DoublingReport(BaseModel):
    """Single-particle spectrum diagnostics of the staggered lattice."""

    positive_levels: int
    negative_levels: int
    zero_levels: int
    max_staggered_multiplicity: int
    max_naive_multiplicity: int
    massless_zero_modes: bool = False
    naive_degeneracy: Dict[str, LevelMultiplicity] = Field(default_factory=dict)
    max_dispersion_error: float = 0.0


class CheckpointStatistics(BaseModel):
    """Empirical histogram against |Ψ(t)|² at one checkpoint."""

    time: float
    tv_distance: float
    noise_bound: float
    max_abs_z: float
    z_exceed_fraction: float
    trajectories: int


class EquivarianceReport(BaseModel):
    """Stochastic equivariance summary over all checkpoints."""

    dimension: int
    z_threshold: float = 3.5
    checkpoints: List[CheckpointStatistics] = Field(default_factory=list)

    @property
    def within_noise(self) -> bool:
        return all(c.tv_distance <= c.noise_bound for c in self.checkpoints)


class ResolutionResult(BaseModel):
    """Jump process against guidance ODE at one lattice resolution."""

    two_n: int
    delta: float
    mean_error: float
    backward_fraction: float
    total_jumps: int
    trials: int
    seed: int


class ConvergenceReport(BaseModel):
    """Continuum-limit study over several resolutions, ordered by decreasing δ."""

    resolutions: List[ResolutionResult] = Field(default_factory=list)
    error_decreasing: Optional[bool] = None
    backward_decreasing: Optional[bool] = None
    backward_ratios: List[Optional[float]] = Field(default_factory=list)
    passed: Optional[bool] = None
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _strictly_decreasing_delta(self) -> "ConvergenceReport":
        deltas = [r.delta for r in self.resolutions]
        if any(b >= a for a, b in zip(deltas, deltas[1:])):
            raise ValueError("resolutions must be strictly decreasing in delta")
        return self
