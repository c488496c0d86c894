"""
Full Fock-space staggered Hamiltonian, used to cross-check the sector assembly.
"""

from __future__ import annotations

import logging
from itertools import combinations
from typing import List, Optional, Sequence

import numpy as np

from ..models.types import LatticeParams
from .operators import DEFAULT_MODE_CAP, OperatorMatrix, build_site_operators, number_operator

logger = logging.getLogger(__name__)


def oracle_sector_hamiltonian(
    params: LatticeParams,
    site_operators: Optional[Sequence[OperatorMatrix]] = None,
    cap: int = DEFAULT_MODE_CAP,
    hopping: bool = True,
) -> OperatorMatrix:
    """H = -(i/2δ) Σ_n [φ†(n)φ(n+1) - φ†(n+1)φ(n)] + Σ_n m(-1)^n φ†(n)φ(n) + contact term.

    Bonds run over n = 0..2N-1 with n+1 taken mod 2N; the sea-energy constant is dropped.
    """
    phi = list(site_operators) if site_operators is not None else build_site_operators(params.sites, cap)
    sites = params.sites
    dim = phi[0].dimension
    mats = [op.matrix for op in phi]
    daggers = [a.conj().T for a in mats]
    numbers = [daggers[n] @ mats[n] for n in range(sites)]

    h = np.zeros((dim, dim), dtype=complex)
    if hopping:
        hop = -1j / (2.0 * params.spacing)
        for n in range(sites):
            right = (n + 1) % sites
            h += hop * (daggers[n] @ mats[right] - daggers[right] @ mats[n])
    for n in range(sites):
        h += params.mass * (-1) ** n * numbers[n]
    if params.coupling != 0.0:
        scale = params.coupling / params.spacing
        for j in range(params.cells):
            even, odd = numbers[2 * j], numbers[2 * j + 1]
            h += scale * (even + odd - 2.0 * even @ odd)

    logger.debug(f"Oracle Hamiltonian on {sites} sites (Fock dimension {dim})")
    return OperatorMatrix(h, label="H")


def fermion_number(params: LatticeParams, cap: int = DEFAULT_MODE_CAP) -> OperatorMatrix:
    """F = Σ_n φ†(n)φ(n) on the position-mode Fock space."""
    return number_operator(build_site_operators(params.sites, cap), label="F")


def sector_fock_indices(sites: int, quanta: int) -> List[int]:
    """Fock basis index of every configuration of the sector, in lexicographic order."""
    return [
        sum(1 << (sites - 1 - k) for k in config)
        for config in combinations(range(sites), quanta)
    ]


def restrict_to_sector(operator: OperatorMatrix, sites: int, quanta: int) -> np.ndarray:
    """Block of ``operator`` on the fermion-number ``quanta`` eigenspace, sector basis order."""
    idx = sector_fock_indices(sites, quanta)
    return operator.matrix[np.ix_(idx, idx)]
