"""
Quartic contact interaction in the staggered pairing.

The continuum (ψ†βψ)² density becomes, per cell (2j, 2j+1),
(n_even - n_odd)² = n_even + n_odd - 2 n_even n_odd, scaled by g/δ. It vanishes
on empty and on doubly occupied cells.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..lattice.basis import SectorBasis, enumerate_sector
from ..models.types import LatticeParams


def contact_interaction_term(params: LatticeParams, basis: Optional[SectorBasis] = None) -> np.ndarray:
    """Diagonal contribution of the contact term on every sector configuration."""
    basis = basis or enumerate_sector(params)
    if params.coupling == 0.0:
        return np.zeros(basis.dimension)
    occ = basis.occupations().astype(float)
    even, odd = occ[:, 0::2], occ[:, 1::2]
    per_cell = even + odd - 2.0 * even * odd
    return (params.coupling / params.spacing) * per_cell.sum(axis=1)
