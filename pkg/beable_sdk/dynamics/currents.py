"""
Bell transition currents and jump rates.

For the beable at configuration n the current into an adjacent configuration m is
J_mn = 2 Re[Ψ*_m (-iH)_mn Ψ_n] and Bell's rate is T_mn = max(J_mn, 0)/|Ψ_n|².
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import SourceProbabilityUnderflow, ValidationError
from ..lattice.basis import Configuration
from ..lattice.hamiltonian import SectorHamiltonian
from ..evolution.propagator import StateVector

logger = logging.getLogger(__name__)

PROBABILITY_FLOOR = 1e-12


@dataclass(frozen=True)
class GeneratorTable:
    """Off-diagonal part of -iH as a padded neighbour table.

    Row n lists the configurations reachable from n in one adjacent move.
    Unused slots hold target -1 and coefficient 0.
    """

    hamiltonian: SectorHamiltonian = field(repr=False)
    targets: np.ndarray = field(repr=False)       # (D, K) int64
    coefficients: np.ndarray = field(repr=False)  # (D, K) complex, (-iH)[target, source]
    moved_from: np.ndarray = field(repr=False)    # (D, K) site left by the quantum
    moved_to: np.ndarray = field(repr=False)      # (D, K) site entered by the quantum
    directions: np.ndarray = field(repr=False)    # (D, K) +1 rightward, -1 leftward, 0 unused

    @property
    def dimension(self) -> int:
        return self.targets.shape[0]

    @property
    def width(self) -> int:
        return self.targets.shape[1]

    @property
    def valid(self) -> np.ndarray:
        return self.targets >= 0


def build_generator_table(hamiltonian: SectorHamiltonian) -> GeneratorTable:
    basis = hamiltonian.basis
    dim = hamiltonian.dimension
    csc = hamiltonian.matrix.tocsc()
    csc.sort_indices()
    cols = np.repeat(np.arange(dim), np.diff(csc.indptr))
    rows = csc.indices.astype(np.int64)
    data = csc.data
    off = rows != cols
    rows, cols, data = rows[off], cols[off], data[off]

    counts = np.bincount(cols, minlength=dim)
    width = int(counts.max()) if counts.size and rows.size else 0
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    slots = np.arange(rows.size) - starts[cols]

    targets = np.full((dim, width), -1, dtype=np.int64)
    coefficients = np.zeros((dim, width), dtype=complex)
    moved_from = np.full((dim, width), -1, dtype=np.int64)
    moved_to = np.full((dim, width), -1, dtype=np.int64)
    directions = np.zeros((dim, width), dtype=np.int8)
    if rows.size:
        occ = basis.occupations()
        change = occ[cols].astype(np.int8) - occ[rows].astype(np.int8)
        left = np.argmax(change == 1, axis=1)
        entered = np.argmax(change == -1, axis=1)
        step = np.where(entered == (left + 1) % basis.sites, 1, -1).astype(np.int8)
        targets[cols, slots] = rows
        coefficients[cols, slots] = -1j * data
        moved_from[cols, slots] = left
        moved_to[cols, slots] = entered
        directions[cols, slots] = step
    return GeneratorTable(
        hamiltonian=hamiltonian,
        targets=targets,
        coefficients=coefficients,
        moved_from=moved_from,
        moved_to=moved_to,
        directions=directions,
    )


def current_matrix(amplitudes: np.ndarray, table: GeneratorTable) -> np.ndarray:
    """J[n, k] = 2 Re[Ψ*_{m} (-iH)_{mn} Ψ_n] for m = targets[n, k]; 0 on unused slots."""
    valid = table.valid
    psi_m = np.where(valid, amplitudes[np.where(valid, table.targets, 0)], 0.0)
    return 2.0 * np.real(np.conj(psi_m) * table.coefficients * amplitudes[:, None])


def rate_matrix(amplitudes: np.ndarray, table: GeneratorTable, floor: float = PROBABILITY_FLOOR) -> np.ndarray:
    """Bell rates for every source; sources with |Ψ_n|² ≤ floor get rate 0."""
    probabilities = np.abs(amplitudes) ** 2
    currents = current_matrix(amplitudes, table)
    safe = np.where(probabilities > floor, probabilities, 1.0)
    rates = np.maximum(currents, 0.0) / safe[:, None]
    rates[probabilities <= floor] = 0.0
    return rates


@dataclass(frozen=True)
class TransitionCurrents:
    """Currents out of one source configuration."""

    source: Configuration
    source_index: int
    target_indices: np.ndarray
    targets: List[Configuration]
    currents: np.ndarray
    directions: np.ndarray
    time: float = 0.0

    def pairs(self) -> List[Tuple[Configuration, float]]:
        return [(t, float(j)) for t, j in zip(self.targets, self.currents)]


@dataclass(frozen=True)
class JumpRateTable:
    """Bell jump rates from one source: T = max(J, 0)/P_source, R = ΣT."""

    source: Configuration
    source_probability: float
    targets: List[Configuration]
    target_indices: np.ndarray
    currents: np.ndarray
    rates: np.ndarray
    directions: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0, dtype=np.int8))

    @property
    def total_rate(self) -> float:
        return float(self.rates.sum())

    def entries(self) -> List[Tuple[Configuration, float, float]]:
        return [(t, float(j), float(r)) for t, j, r in zip(self.targets, self.currents, self.rates)]


def transition_currents(
    state: StateVector,
    source: Sequence[int],
    hamiltonian: SectorHamiltonian,
    table: Optional[GeneratorTable] = None,
) -> TransitionCurrents:
    """Currents J_mn into every configuration m one adjacent move away from ``source``."""
    table = table or build_generator_table(hamiltonian)
    basis = hamiltonian.basis
    if state.dimension != basis.dimension:
        raise ValidationError(f"state dimension {state.dimension} does not match the sector ({basis.dimension})")
    source = basis.validate(source)
    n = basis.rank(source)
    valid = table.valid[n]
    targets = table.targets[n, valid]
    psi = state.amplitudes
    currents = 2.0 * np.real(np.conj(psi[targets]) * table.coefficients[n, valid] * psi[n])
    return TransitionCurrents(
        source=source,
        source_index=n,
        target_indices=targets,
        targets=[basis.unrank(int(m)) for m in targets],
        currents=currents,
        directions=table.directions[n, valid],
        time=state.time,
    )


def jump_rates(
    currents: TransitionCurrents,
    state: StateVector,
    floor: float = PROBABILITY_FLOOR,
) -> JumpRateTable:
    probability = float(np.abs(state.amplitudes[currents.source_index]) ** 2)
    if probability <= floor:
        raise SourceProbabilityUnderflow(
            f"|Ψ|² = {probability:.3e} at source {currents.source} is below the floor {floor}",
            details={"source": list(currents.source), "probability": probability, "time": state.time},
        )
    rates = np.maximum(currents.currents, 0.0) / probability
    return JumpRateTable(
        source=currents.source,
        source_probability=probability,
        targets=currents.targets,
        target_indices=currents.target_indices,
        currents=currents.currents,
        rates=rates,
        directions=currents.directions,
    )
