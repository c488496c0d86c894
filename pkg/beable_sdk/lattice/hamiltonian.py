"""
Staggered-fermion Hamiltonian restricted to a fixed fermion-number sector.

    H = -(i/2δ) Σ_n [φ†(n)φ(n+1) - φ†(n+1)φ(n)] + Σ_n m(-1)^n φ†(n)φ(n)

so a quantum hopping k → k+1 picks up ⟨k+1|H|k⟩ = +i/(2δ) and k → k-1 picks up
-i/(2δ). Bulk hops never pass another quantum. The hop across the periodic
seam (2N-1 ↔ 0) passes the other ω-1 quanta and carries (-1)^(ω-1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse

from ..models.types import LatticeParams
from .basis import SectorBasis, enumerate_sector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SectorHamiltonian:
    """Sparse Hermitian sector Hamiltonian with deterministic CSR row order."""

    basis: SectorBasis
    matrix: sparse.csr_matrix = field(repr=False)
    hopping: bool = True

    @property
    def params(self) -> LatticeParams:
        return self.basis.params

    @property
    def spacing(self) -> float:
        return self.params.spacing

    @property
    def mass(self) -> float:
        return self.params.mass

    @property
    def coupling(self) -> float:
        return self.params.coupling

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal().real

    def spectral_radius_bound(self) -> float:
        """Gershgorin bound on the largest |eigenvalue|."""
        return float(np.max(np.asarray(abs(self.matrix).sum(axis=1)).ravel()))

    def hermiticity_defect(self) -> float:
        diff = (self.matrix - self.matrix.conj().T).tocsr()
        diff.eliminate_zeros()
        return float(np.max(np.abs(diff.data))) if diff.nnz else 0.0


def hop_moves(basis: SectorBasis):
    """Yield (source_rows, target_ranks, amplitudes) for every allowed one-site move.

    One batch per (quantum index, direction); rows are sources in basis order.
    """
    n_sites = basis.sites
    omega = basis.quanta
    configs = basis.configurations
    occ = basis.occupations()
    rows = np.arange(basis.dimension)
    hop = 1.0 / (2.0 * basis.params.spacing)
    seam_sign = -1.0 if omega % 2 == 0 else 1.0
    for i in range(omega):
        sites = configs[:, i]
        for direction in (1, -1):
            targets = (sites + direction) % n_sites
            allowed = occ[rows, targets] == 0
            if not np.any(allowed):
                continue
            moved = configs[allowed].copy()
            moved[:, i] = targets[allowed]
            moved.sort(axis=1)
            seam = (sites[allowed] == n_sites - 1) if direction == 1 else (sites[allowed] == 0)
            amplitude = direction * 1j * hop * np.where(seam, seam_sign, 1.0)
            yield rows[allowed], basis.rank_many(moved), amplitude


def assemble_hamiltonian(
    params: LatticeParams,
    basis: Optional[SectorBasis] = None,
    hopping: bool = True,
) -> SectorHamiltonian:
    """Assemble the sector Hamiltonian including the mass and contact terms.

    ``hopping=False`` drops the kinetic term (the δ → ∞ emulation).
    """
    from ..evolution.interaction import contact_interaction_term

    basis = basis or enumerate_sector(params)
    dim = basis.dimension
    occ = basis.occupations()

    stagger = params.mass * (1.0 - 2.0 * (np.arange(params.sites) % 2))
    diagonal = occ @ stagger + contact_interaction_term(params, basis)

    row_parts = [np.arange(dim)]
    col_parts = [np.arange(dim)]
    data_parts = [diagonal.astype(complex)]
    if hopping:
        for sources, targets, amplitude in hop_moves(basis):
            row_parts.append(targets)
            col_parts.append(sources)
            data_parts.append(amplitude)

    matrix = sparse.coo_matrix(
        (np.concatenate(data_parts), (np.concatenate(row_parts), np.concatenate(col_parts))),
        shape=(dim, dim),
    ).tocsr()
    matrix.sum_duplicates()
    matrix.eliminate_zeros()
    matrix.sort_indices()

    logger.debug(
        f"Assembled sector Hamiltonian 2N={params.sites}, ω={params.quanta}: "
        f"dimension {dim}, {matrix.nnz} non-zeros"
    )
    return SectorHamiltonian(basis=basis, matrix=matrix, hopping=hopping)
