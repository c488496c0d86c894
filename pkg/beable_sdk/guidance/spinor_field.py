"""
Two-component continuum field from the staggered lattice.

Cell j pairs sites (2j, 2j+1) at x_j = 2jδ: the even site feeds the upper
component and the odd site the lower one, with the 1/sqrt(2δ) field
renormalization. For ω quanta the antisymmetric sector amplitudes become a
tensor of shape (N, 2) * ω normalized so that ∫ρ = 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Optional

import numpy as np

from ..exceptions import OddSiteCount, SectorTooLarge, ValidationError
from ..lattice.basis import SectorBasis

logger = logging.getLogger(__name__)

TENSOR_CAP = 10_000_000


@dataclass(frozen=True)
class SpinorField:
    """Spinor wavefunction Ψ_{s₁…s_ω}(x₁…x_ω) on a periodic uniform grid."""

    x_grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)  # (N, 2, N, 2, ...) for ω quanta
    time: float = 0.0

    @property
    def quanta(self) -> int:
        return self.values.ndim // 2

    @property
    def points(self) -> int:
        return self.x_grid.size

    @property
    def step(self) -> float:
        return float(self.x_grid[1] - self.x_grid[0]) if self.x_grid.size > 1 else 0.0

    @property
    def length(self) -> float:
        return self.step * self.points

    def density(self) -> np.ndarray:
        """ρ summed over every spinor index; shape (N,) * ω."""
        spinor_axes = tuple(range(1, self.values.ndim, 2))
        return np.sum(np.abs(self.values) ** 2, axis=spinor_axes)

    def norm(self) -> float:
        """∫ρ by the periodic trapezoid rule."""
        return float(np.sum(self.density()) * self.step ** self.quanta)

    def with_values(self, values: np.ndarray, time: Optional[float] = None) -> "SpinorField":
        return SpinorField(self.x_grid, values, self.time if time is None else time)


def _cell_grid(cells: int, spacing: float, origin: float = 0.0) -> np.ndarray:
    return origin + 2.0 * spacing * np.arange(cells)


def staggered_to_spinor(amplitudes: np.ndarray, spacing: float, time: float = 0.0) -> SpinorField:
    """(Ψ₁, Ψ₂)(x_j) = (amplitude at 2j, amplitude at 2j+1)/sqrt(2δ) for one quantum."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if amplitudes.ndim != 1:
        raise ValidationError("staggered_to_spinor expects one amplitude per site")
    if amplitudes.size % 2:
        raise OddSiteCount(f"{amplitudes.size} sites cannot be paired into spinor cells")
    cells = amplitudes.size // 2
    values = amplitudes.reshape(cells, 2) / math.sqrt(2.0 * spacing)
    return SpinorField(_cell_grid(cells, spacing), values, time)


def antisymmetric_tensor(amplitudes: np.ndarray, basis: SectorBasis) -> np.ndarray:
    """F[k₁,…,k_ω] over all site tuples, antisymmetric, equal to Ψ on ordered tuples."""
    omega, sites = basis.quanta, basis.sites
    if sites ** omega > TENSOR_CAP:
        raise SectorTooLarge(
            f"spinor tensor with {sites}^{omega} entries exceeds the cap of {TENSOR_CAP}",
            details={"sites": sites, "quanta": omega},
        )
    tensor = np.zeros((sites,) * omega, dtype=complex)
    configs = basis.configurations
    for perm in permutations(range(omega)):
        inversions = sum(1 for a in range(omega) for b in range(a + 1, omega) if perm[a] > perm[b])
        sign = -1.0 if inversions % 2 else 1.0
        index = tuple(configs[:, p] for p in perm)
        tensor[index] = sign * amplitudes
    return tensor


def sector_to_spinor(
    amplitudes: np.ndarray,
    basis: SectorBasis,
    time: float = 0.0,
) -> SpinorField:
    """Spinor tensor of an ω-quanta sector state, normalized by 1/sqrt(ω!·(2δ)^ω)."""
    if basis.sites % 2:
        raise OddSiteCount(f"{basis.sites} sites cannot be paired into spinor cells")
    omega = basis.quanta
    if omega == 0:
        raise ValidationError("the empty sector has no spinor wavefunction")
    spacing = basis.params.spacing
    tensor = antisymmetric_tensor(np.asarray(amplitudes, dtype=complex), basis)
    cells = basis.sites // 2
    values = tensor.reshape((cells, 2) * omega)
    values = values / math.sqrt(math.factorial(omega) * (2.0 * spacing) ** omega)
    return SpinorField(_cell_grid(cells, spacing), values, time)


def smoothness(field_: SpinorField) -> float:
    """Largest relative neighbour difference of either component (one quantum)."""
    values = field_.values
    scale = float(np.max(np.abs(values)))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(np.roll(values, -1, axis=0) - values))) / scale
