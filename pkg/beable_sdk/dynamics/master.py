"""
Deterministic master equation dP_m/dt = Σ_n (T_mn P_n - T_nm P_m) with Bell rates.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..exceptions import StepTooLarge, ValidationError
from ..evolution.propagator import Propagator, StateVector
from ..lattice.hamiltonian import SectorHamiltonian
from ..models.types import EvolutionConfig
from .currents import PROBABILITY_FLOOR, GeneratorTable, build_generator_table, rate_matrix

logger = logging.getLogger(__name__)

NORMALIZATION_TOLERANCE = 1e-9
MAX_RATE_STEP = 0.5
MAX_SUBDIVISIONS = 1024


@dataclass(frozen=True)
class ProbabilityVector:
    """Configuration probabilities over the sector basis at time t."""

    values: np.ndarray = field(repr=False)
    time: float = 0.0

    def __post_init__(self) -> None:
        if np.any(self.values < -NORMALIZATION_TOLERANCE):
            raise ValidationError("probabilities must be non-negative")
        total = float(np.sum(self.values))
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValidationError(f"probabilities sum to {total:.12f}, not 1")

    @classmethod
    def from_state(cls, state: StateVector) -> "ProbabilityVector":
        values = state.probabilities()
        return cls(values / values.sum(), state.time)

    @classmethod
    def quenched(cls, state: StateVector, mixing: float) -> "ProbabilityVector":
        """(1 - mixing)·|Ψ|² + mixing·uniform: a start deliberately off the quantum distribution.

        Its total variation distance from |Ψ|² is mixing·TV(|Ψ|², uniform).
        """
        if not 0.0 <= mixing <= 1.0:
            raise ValidationError(f"mixing must lie in [0, 1], got {mixing}")
        quantum = cls.from_state(state).values
        uniform = np.full(quantum.size, 1.0 / quantum.size)
        return cls((1.0 - mixing) * quantum + mixing * uniform, state.time)

    def tv_distance(self, other: np.ndarray) -> float:
        return 0.5 * float(np.sum(np.abs(self.values - np.asarray(other))))


@dataclass
class MasterTimeline:
    """Master-equation solution next to the quantum distribution |Ψ(t)|²."""

    times: np.ndarray
    probabilities: np.ndarray = field(repr=False)  # (T, D)
    quantum: np.ndarray = field(repr=False)        # (T, D)
    subdivisions: int = 0

    @property
    def max_residuals(self) -> np.ndarray:
        """max_m |P_m(t) - |Ψ_m(t)|²| per reported time."""
        return np.max(np.abs(self.probabilities - self.quantum), axis=1)

    @property
    def tv_distances(self) -> np.ndarray:
        return 0.5 * np.sum(np.abs(self.probabilities - self.quantum), axis=1)

    @property
    def normalization_errors(self) -> np.ndarray:
        return np.abs(self.probabilities.sum(axis=1) - 1.0)

    def at(self, index: int) -> ProbabilityVector:
        return ProbabilityVector(self.probabilities[index], float(self.times[index]))


def master_rhs(probabilities: np.ndarray, rates: np.ndarray, table: GeneratorTable) -> np.ndarray:
    """Inflow minus outflow for the padded rate table ``rates[n, k]`` (n → targets[n, k])."""
    valid = table.valid
    flow = rates * probabilities[:, None]
    inflow = np.bincount(table.targets[valid], weights=flow[valid], minlength=probabilities.size)
    return inflow - flow.sum(axis=1)


def master_equation_evolve(
    initial: ProbabilityVector,
    hamiltonian: SectorHamiltonian,
    state: StateVector,
    horizon: float,
    dt: float,
    evolution: Optional[EvolutionConfig] = None,
    report_every: int = 1,
    floor: float = PROBABILITY_FLOOR,
) -> MasterTimeline:
    """RK4 integration of the master equation with rates from the concurrently evolved pilot-state.

    The pilot-state is evaluated exactly at t, t+h/2 and t+h of every step. A
    step whose largest outflow rate times h exceeds 0.5 is split into equal
    substeps; more than 1024 substeps raise ``StepTooLarge``.
    """
    if dt <= 0:
        raise ValidationError(f"dt must be positive, got {dt}")
    if initial.values.size != state.dimension:
        raise ValidationError("initial probabilities and pilot-state live on different sectors")
    if report_every < 1:
        raise ValidationError("report_every must be at least 1")

    steps = max(1, math.ceil(horizon / dt - 1e-9)) if horizon > 0 else 0
    h = horizon / steps if steps else dt
    propagator = Propagator(hamiltonian, evolution)
    table = build_generator_table(hamiltonian)
    half_grid = state.time + 0.5 * h * np.arange(2 * steps + 1)
    pilot = propagator.timeline(state, half_grid)

    p = initial.values.astype(float).copy()
    times: List[float] = [state.time]
    history: List[np.ndarray] = [p.copy()]
    quantum: List[np.ndarray] = [np.abs(pilot.frames[0]) ** 2]
    subdivisions = 0

    def rates_at(amplitudes: np.ndarray) -> np.ndarray:
        return rate_matrix(amplitudes, table, floor)

    def rk4(p: np.ndarray, r0: np.ndarray, r_half: np.ndarray, r1: np.ndarray, step: float) -> np.ndarray:
        k1 = master_rhs(p, r0, table)
        k2 = master_rhs(p + 0.5 * step * k1, r_half, table)
        k3 = master_rhs(p + 0.5 * step * k2, r_half, table)
        k4 = master_rhs(p + step * k3, r1, table)
        return p + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    for k in range(steps):
        t = float(half_grid[2 * k])
        r0 = rates_at(pilot.frames[2 * k])
        r_half = rates_at(pilot.frames[2 * k + 1])
        r1 = rates_at(pilot.frames[2 * k + 2])
        peak = max(float(np.max(r.sum(axis=1))) if r.size else 0.0 for r in (r0, r_half, r1))
        pieces = max(1, math.ceil(peak * h / MAX_RATE_STEP))
        if pieces > MAX_SUBDIVISIONS:
            raise StepTooLarge(
                f"outflow rate {peak:.4g} needs {pieces} substeps of the master-equation step {h:.4g}",
                details={"rate": peak, "step": h, "time": t},
            )
        if pieces == 1:
            p = rk4(p, r0, r_half, r1, h)
        else:
            subdivisions += pieces
            sub = h / pieces
            for j in range(pieces):
                t0 = t + j * sub
                a0 = pilot.state_at(t0).amplitudes
                ah = pilot.state_at(t0 + 0.5 * sub).amplitudes
                a1 = pilot.state_at(t0 + sub).amplitudes
                p = rk4(p, rates_at(a0), rates_at(ah), rates_at(a1), sub)
        if (k + 1) % report_every == 0 or k + 1 == steps:
            times.append(float(half_grid[2 * k + 2]))
            history.append(p.copy())
            quantum.append(np.abs(pilot.frames[2 * k + 2]) ** 2)

    result = MasterTimeline(
        times=np.asarray(times),
        probabilities=np.asarray(history),
        quantum=np.asarray(quantum),
        subdivisions=subdivisions,
    )
    drift = float(np.max(result.normalization_errors))
    if drift > NORMALIZATION_TOLERANCE:
        logger.warning(f"Master-equation normalization drifted by {drift:.3e}")
    logger.info(
        f"Master equation over {steps} steps (h={h:.3g}): "
        f"max |P - |Ψ|²| = {float(np.max(result.max_residuals)):.3e}"
    )
    return result
