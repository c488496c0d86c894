"""
Plane-wave spinors of the 1+1D Dirac Hamiltonian H = α p + β m with α = σx, β = σz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import ValidationError
from ..models.types import EnergySign


@dataclass(frozen=True)
class SpinorBasis:
    """Positive- and negative-energy spinors at one momentum.

    Normalized so that u†u = v†v = E/m.
    """

    momentum: float
    mass: float
    energy: float
    u: np.ndarray
    v: np.ndarray


def dirac_spinors(p: float, m: float) -> SpinorBasis:
    """u(p) ∝ (1, p/(m+E)) and v(p) ∝ (p/(m+E), 1), scaled to u†u = v†v = E/m."""
    if m <= 0:
        raise ValidationError(f"dirac_spinors needs a positive mass, got {m}")
    energy = math.hypot(p, m)
    ratio = p / (m + energy)
    scale = math.sqrt((m + energy) / (2.0 * m))
    u = scale * np.array([1.0, ratio], dtype=complex)
    v = scale * np.array([ratio, 1.0], dtype=complex)
    return SpinorBasis(momentum=float(p), mass=float(m), energy=energy, u=u, v=v)


def packet_spinor(p: float, m: float, sign: EnergySign = EnergySign.POSITIVE) -> np.ndarray:
    """Unit-norm two-component spinor carried by a wave packet of mean momentum p.

    Positive energy uses u(p), negative energy v(-p). For m = 0 the chiral
    limit (1, ±sgn p)/√2 is used, with p = 0 counted as right-moving.
    """
    if m <= 0:
        direction = 1.0 if p >= 0 else -1.0
        if sign is EnergySign.POSITIVE:
            spinor = np.array([1.0, direction], dtype=complex)
        else:
            spinor = np.array([-direction, 1.0], dtype=complex)
        return spinor / math.sqrt(2.0)

    basis = dirac_spinors(p if sign is EnergySign.POSITIVE else -p, m)
    spinor = basis.u if sign is EnergySign.POSITIVE else basis.v
    return spinor / np.linalg.norm(spinor)
