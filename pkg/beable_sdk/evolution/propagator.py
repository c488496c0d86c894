"""
Schrödinger propagation of the pilot-state inside the fixed sector.

Two integrators share one interface: an exact eigendecomposition path for
sectors up to ``eigen_dimension_threshold`` and a fixed-substep RK4 path for
larger ones. ħ = c = 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ..exceptions import NormDrift, StepTooLarge, ValidationError
from ..lattice.hamiltonian import SectorHamiltonian
from ..models.types import EvolutionConfig, IntegratorMethod

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10


@dataclass(frozen=True)
class StateVector:
    """Pilot-state amplitudes over the sector basis at time t."""

    amplitudes: np.ndarray = field(repr=False)
    time: float = 0.0

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def normalized(self) -> "StateVector":
        norm = self.norm
        if norm == 0.0:
            raise ValidationError("cannot normalize the zero state")
        return StateVector(self.amplitudes / norm, self.time)

    def with_phase(self, phase: float) -> "StateVector":
        return StateVector(self.amplitudes * np.exp(1j * phase), self.time)


@dataclass
class EvolutionDiagnostics:
    method: IntegratorMethod
    substep: Optional[float] = None
    substeps: int = 0
    max_norm_drift: float = 0.0
    renormalizations: int = 0

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "substep": self.substep,
            "substeps": self.substeps,
            "max_norm_drift": self.max_norm_drift,
            "renormalizations": self.renormalizations,
        }


class Propagator:
    """Reusable exp(-iHΔt) for one sector Hamiltonian."""

    def __init__(self, hamiltonian: SectorHamiltonian, config: Optional[EvolutionConfig] = None):
        self.hamiltonian = hamiltonian
        self.config = config or EvolutionConfig()
        method = self.config.method
        if method is IntegratorMethod.AUTO:
            method = (
                IntegratorMethod.EIGENDECOMPOSITION
                if hamiltonian.dimension <= self.config.eigen_dimension_threshold
                else IntegratorMethod.RK4
            )
        self.method = method
        self.diagnostics = EvolutionDiagnostics(method=method)
        self._eigenvalues: Optional[np.ndarray] = None
        self._eigenvectors: Optional[np.ndarray] = None

        if method is IntegratorMethod.EIGENDECOMPOSITION:
            self._eigenvalues, self._eigenvectors = np.linalg.eigh(hamiltonian.dense())
            logger.debug(f"Eigendecomposition of dimension {hamiltonian.dimension} ready")
        else:
            radius = hamiltonian.spectral_radius_bound()
            if self.config.dt * radius > self.config.max_step_radius:
                raise StepTooLarge(
                    f"rk4 substep {self.config.dt} times spectral radius bound {radius:.4g} "
                    f"exceeds {self.config.max_step_radius}",
                    details={"dt": self.config.dt, "spectral_radius": radius},
                )
            self.diagnostics.substep = self.config.dt

    @property
    def eigenvalues(self) -> Optional[np.ndarray]:
        return self._eigenvalues

    def _rk4(self, psi: np.ndarray, delta_t: float) -> np.ndarray:
        steps = max(1, math.ceil(delta_t / self.config.dt - 1e-12))
        h = delta_t / steps
        matrix = self.hamiltonian.matrix

        def rhs(v: np.ndarray) -> np.ndarray:
            return -1j * (matrix @ v)

        for _ in range(steps):
            k1 = rhs(psi)
            k2 = rhs(psi + 0.5 * h * k1)
            k3 = rhs(psi + 0.5 * h * k2)
            k4 = rhs(psi + h * k3)
            psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        self.diagnostics.substeps += steps
        return psi

    def apply(self, amplitudes: np.ndarray, delta_t: float) -> np.ndarray:
        """exp(-iHΔt) applied to raw amplitudes."""
        if delta_t < 0:
            raise ValidationError(f"Δt must be non-negative, got {delta_t}")
        if delta_t == 0:
            return amplitudes.copy()
        if self.method is IntegratorMethod.EIGENDECOMPOSITION:
            v = self._eigenvectors
            return v @ (np.exp(-1j * self._eigenvalues * delta_t) * (v.conj().T @ amplitudes))

        psi = self._rk4(amplitudes.astype(complex), delta_t)
        norm = float(np.linalg.norm(psi))
        drift = abs(norm - 1.0)
        self.diagnostics.max_norm_drift = max(self.diagnostics.max_norm_drift, drift)
        if drift / delta_t > self.config.drift_tolerance:
            raise NormDrift(
                f"rk4 norm drift {drift:.3e} over Δt={delta_t} exceeds {self.config.drift_tolerance} per unit time",
                details={"drift": drift, "delta_t": delta_t},
            )
        if drift > 0.0:
            self.diagnostics.renormalizations += 1
        return psi / norm

    def evolve(self, state: StateVector, delta_t: float) -> StateVector:
        if abs(state.norm - 1.0) > NORM_TOLERANCE:
            raise ValidationError(f"state norm {state.norm:.12f} is not 1")
        return StateVector(self.apply(state.amplitudes, delta_t), state.time + delta_t)

    def timeline(self, initial: StateVector, times: Sequence[float]) -> "PilotTimeline":
        """Pilot-state at each of the increasing ``times`` (all ≥ initial.time)."""
        times = np.asarray(times, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise ValidationError("timeline needs at least one time")
        if np.any(np.diff(times) <= 0) or times[0] < initial.time:
            raise ValidationError("timeline times must be increasing and not precede the initial state")

        if self.method is IntegratorMethod.EIGENDECOMPOSITION:
            v = self._eigenvectors
            coeffs = v.conj().T @ initial.amplitudes
            phases = np.exp(-1j * np.outer(times - initial.time, self._eigenvalues))
            frames = (phases * coeffs) @ v.T
        else:
            frames = np.empty((times.size, initial.dimension), dtype=complex)
            psi, t = initial.amplitudes, initial.time
            for i, target in enumerate(times):
                psi = self.apply(psi, target - t)
                t = target
                frames[i] = psi
        return PilotTimeline(times=times, frames=frames, propagator=self)


@dataclass
class PilotTimeline:
    """Precomputed pilot-state frames; read-only once built."""

    times: np.ndarray
    frames: np.ndarray = field(repr=False)  # (len(times), dimension)
    propagator: Optional[Propagator] = field(default=None, repr=False)

    def __len__(self) -> int:
        return self.times.size

    def state(self, index: int) -> StateVector:
        return StateVector(self.frames[index], float(self.times[index]))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.frames) ** 2

    def index_of(self, t: float, tolerance: float = 1e-12) -> Optional[int]:
        i = int(np.searchsorted(self.times, t - tolerance))
        if i < self.times.size and abs(self.times[i] - t) <= tolerance:
            return i
        return None

    def state_at(self, t: float) -> StateVector:
        """Exact frame if stored, otherwise propagated from the latest earlier frame."""
        i = self.index_of(t)
        if i is not None:
            return self.state(i)
        if self.propagator is None:
            raise ValidationError(f"time {t} is not a stored frame and no propagator is attached")
        base = int(np.searchsorted(self.times, t)) - 1
        if base < 0:
            raise ValidationError(f"time {t} precedes the timeline")
        amplitudes = self.propagator.apply(self.frames[base], t - float(self.times[base]))
        return StateVector(amplitudes, t)


def evolve(
    state: StateVector,
    hamiltonian: SectorHamiltonian,
    delta_t: float,
    config: Optional[EvolutionConfig] = None,
) -> StateVector:
    """|Ψ(t+Δt)⟩ = exp(-iHΔt)|Ψ(t)⟩."""
    return Propagator(hamiltonian, config).evolve(state, delta_t)


def energy(state: StateVector, hamiltonian: SectorHamiltonian) -> float:
    return float(np.real(np.vdot(state.amplitudes, hamiltonian.matrix @ state.amplitudes)))


def conservation_drifts(timeline: PilotTimeline, hamiltonian: SectorHamiltonian) -> dict:
    """Largest norm and energy deviation from the first frame."""
    norms = np.linalg.norm(timeline.frames, axis=1)
    energies: List[float] = [energy(timeline.state(i), hamiltonian) for i in range(len(timeline))]
    return {
        "max_norm_drift": float(np.max(np.abs(norms - norms[0]))),
        "max_energy_drift": float(np.max(np.abs(np.asarray(energies) - energies[0]))),
    }
