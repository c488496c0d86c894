"""
Lattice dispersion p_lat = sin(pδ)/δ and the fermion-doubling diagnostics.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, Tuple

import numpy as np

from ..models.types import DispersionPoint, DoublingReport, LatticeParams, LevelMultiplicity
from .hamiltonian import assemble_hamiltonian

logger = logging.getLogger(__name__)

LEVEL_DECIMALS = 8
ZERO_TOLERANCE = 1e-9


def dispersion(p: float, params: LatticeParams) -> DispersionPoint:
    p_lat = math.sin(p * params.spacing) / params.spacing
    return DispersionPoint(p=float(p), p_lat=p_lat, e_lat=math.hypot(p_lat, params.mass))


def reduced_momenta(params: LatticeParams) -> np.ndarray:
    """p_j = πj/(Nδ) for j = 0..N-1; each contributes the pair ±E_lat(p_j)."""
    return math.pi * np.arange(params.cells) / (params.cells * params.spacing)


def expected_spectrum(params: LatticeParams) -> np.ndarray:
    energies = np.array([dispersion(p, params).e_lat for p in reduced_momenta(params)])
    return np.sort(np.concatenate([energies, -energies]))


def single_particle_matrix(params: LatticeParams) -> np.ndarray:
    """Dense 2N×2N staggered Hamiltonian of one quantum, contact term excluded."""
    one = params.model_copy(update={"quanta": 1, "coupling": 0.0})
    return assemble_hamiltonian(one).dense()


def single_particle_spectrum(params: LatticeParams) -> np.ndarray:
    return np.linalg.eigvalsh(single_particle_matrix(params))


def naive_dirac_matrix(params: LatticeParams) -> np.ndarray:
    """Two-component lattice Dirac operator σx ⊗ (-i∇_sym) + σz ⊗ m on 2N sites."""
    n = params.sites
    shift = np.roll(np.eye(n), 1, axis=1)  # (S ψ)(x) = ψ(x+δ)
    derivative = -1j * (shift - shift.T) / (2.0 * params.spacing)
    sigma_x = np.array([[0, 1], [1, 0]], dtype=complex)
    sigma_z = np.diag([1.0, -1.0]).astype(complex)
    return np.kron(sigma_x, derivative) + params.mass * np.kron(sigma_z, np.eye(n))


def _multiplicities(levels: np.ndarray) -> Dict[float, int]:
    rounded = np.round(levels, LEVEL_DECIMALS) + 0.0  # folds -0.0 into 0.0
    values, counts = np.unique(rounded, return_counts=True)
    return {float(v): int(c) for v, c in zip(values, counts)}


def doubling_report(params: LatticeParams) -> DoublingReport:
    """Compare the staggered one-quantum spectrum with ±E_lat and with the naive lattice."""
    staggered = single_particle_spectrum(params)
    naive = np.linalg.eigvalsh(naive_dirac_matrix(params))

    positive = int(np.sum(staggered > ZERO_TOLERANCE))
    negative = int(np.sum(staggered < -ZERO_TOLERANCE))
    zero = staggered.size - positive - negative

    staggered_counts = _multiplicities(staggered)
    naive_counts = _multiplicities(naive)
    table: Dict[str, LevelMultiplicity] = {}
    for level in sorted(set(staggered_counts) | set(naive_counts)):
        table[f"{level:.{LEVEL_DECIMALS}f}"] = LevelMultiplicity(
            energy=level,
            staggered=staggered_counts.get(level, 0),
            naive=naive_counts.get(level, 0),
        )

    error = float(np.max(np.abs(staggered - expected_spectrum(params))))
    if zero:
        logger.info(f"Massless zero modes on 2N={params.sites}: zero level multiplicity {zero}")
    return DoublingReport(
        positive_levels=positive,
        negative_levels=negative,
        zero_levels=zero,
        max_staggered_multiplicity=max(staggered_counts.values()),
        max_naive_multiplicity=max(naive_counts.values()),
        massless_zero_modes=zero > 0,
        naive_degeneracy=table,
        max_dispersion_error=error,
    )


def spectrum_rows(params: LatticeParams) -> Tuple[np.ndarray, np.ndarray]:
    """Sorted staggered eigenvalues and the matching ±E_lat closed form."""
    return single_particle_spectrum(params), expected_spectrum(params)
