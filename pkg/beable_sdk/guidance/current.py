"""
Continuum density and guidance currents.

ρ sums |Ψ|² over all spinor indices. The current of coordinate j contracts the
j-th spinor index with α = σx and all others diagonally, so for one quantum
J = 2 Re(Ψ₁* Ψ₂).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Tuple

import numpy as np

from ..exceptions import OutOfGrid, ValidationError
from .spinor_field import SpinorField

logger = logging.getLogger(__name__)


def coordinate_current(values: np.ndarray, coordinate: int) -> np.ndarray:
    """J_j on the grid: 2 Re Σ Ψ*[…s_j=0…] Ψ[…s_j=1…], shape (N,) * ω."""
    axis = 2 * coordinate + 1
    upper = np.take(values, 0, axis=axis)
    lower = np.take(values, 1, axis=axis)
    product_ = np.conj(upper) * lower
    remaining = tuple(a if a < axis else a - 1 for a in range(1, values.ndim, 2) if a != axis)
    return 2.0 * np.real(np.sum(product_, axis=remaining) if remaining else product_)


@dataclass(frozen=True)
class GuidanceField:
    """Density and per-coordinate currents of one spinor frame on its grid."""

    x_grid: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)   # (N,) * ω
    currents: np.ndarray = field(repr=False)  # (ω, N, ..., N)
    time: float = 0.0

    @property
    def quanta(self) -> int:
        return self.currents.shape[0]

    @property
    def step(self) -> float:
        return float(self.x_grid[1] - self.x_grid[0])

    @property
    def length(self) -> float:
        return self.step * self.x_grid.size

    def integral(self) -> float:
        return float(np.sum(self.density) * self.step ** self.quanta)

    def at(self, positions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Multilinear periodic interpolation of (ρ, J) at positions of shape (n, ω)."""
        positions = np.atleast_2d(np.asarray(positions, dtype=float))
        if positions.shape[1] != self.quanta:
            raise ValidationError(f"positions need {self.quanta} coordinates, got shape {positions.shape}")
        origin = float(self.x_grid[0])
        if np.any(positions < origin) or np.any(positions >= origin + self.length):
            raise OutOfGrid(
                f"positions leave the grid [{origin}, {origin + self.length})",
                details={"min": float(positions.min()), "max": float(positions.max())},
            )
        points = self.x_grid.size
        scaled = (positions - origin) / self.step
        lower = np.floor(scaled).astype(np.int64) % points
        frac = scaled - np.floor(scaled)
        upper = (lower + 1) % points

        rho = np.zeros(positions.shape[0])
        current = np.zeros((positions.shape[0], self.quanta))
        for corner in product((0, 1), repeat=self.quanta):
            weight = np.ones(positions.shape[0])
            index = []
            for i, bit in enumerate(corner):
                weight *= frac[:, i] if bit else 1.0 - frac[:, i]
                index.append(upper[:, i] if bit else lower[:, i])
            index = tuple(index)
            rho += weight * self.density[index]
            for j in range(self.quanta):
                current[:, j] += weight * self.currents[j][index]
        return rho, current


def guidance_field(spinor: SpinorField) -> GuidanceField:
    values = spinor.values
    currents = np.stack([coordinate_current(values, j) for j in range(spinor.quanta)])
    return GuidanceField(x_grid=spinor.x_grid, density=spinor.density(), currents=currents, time=spinor.time)


def current_density(spinor: SpinorField, positions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(ρ, J₁…J_ω) at ``positions`` (shape (n, ω) or (ω,)) by linear interpolation on the grid."""
    return guidance_field(spinor).at(positions)


def continuity_residual(before: SpinorField, after: SpinorField) -> np.ndarray:
    """∂ρ/∂t + ∇·J at the mid-time, by central differences on the periodic grid (one quantum)."""
    if before.quanta != 1 or after.quanta != 1:
        raise ValidationError("continuity_residual is defined for one-quantum fields")
    dt = after.time - before.time
    if dt <= 0:
        raise ValidationError("frames must be ordered in time")
    a, b = guidance_field(before), guidance_field(after)
    drho = (b.density - a.density) / dt
    current = 0.5 * (a.currents[0] + b.currents[0])
    divergence = (np.roll(current, -1) - np.roll(current, 1)) / (2.0 * a.step)
    return drho + divergence
