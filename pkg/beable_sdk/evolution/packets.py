"""
Initial pilot-states: Gaussian spinor orbitals and their Slater determinants.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from ..exceptions import DegenerateOrbitals, ValidationError
from ..fock.spinors import packet_spinor
from ..lattice.basis import SectorBasis
from ..models.types import LatticeParams, OrbitalSpec, PacketSpec
from .propagator import StateVector

logger = logging.getLogger(__name__)

GRAM_TOLERANCE = 1e-12


def periodic_displacement(x: np.ndarray, center: float, length: float) -> np.ndarray:
    """x - center folded into [-L/2, L/2)."""
    return (np.asarray(x) - center + 0.5 * length) % length - 0.5 * length


def _envelope(x: np.ndarray, spec: OrbitalSpec, length: float) -> np.ndarray:
    d = periodic_displacement(x, spec.center, length)
    return np.exp(-(d ** 2) / (4.0 * spec.width ** 2)) * np.exp(1j * spec.momentum * d)


def lattice_orbital(spec: OrbitalSpec, params: LatticeParams) -> np.ndarray:
    """Unnormalized one-quantum amplitudes over the 2N sites.

    Site s sits at x = sδ; even sites carry the upper spinor component, odd sites the lower.
    """
    sites = np.arange(params.sites)
    values = _envelope(sites * params.spacing, spec, params.box_length)
    spinor = packet_spinor(spec.momentum, params.mass, spec.energy_sign)
    return values * np.where(sites % 2 == 0, spinor[0], spinor[1])


def continuum_orbital(spec: OrbitalSpec, mass: float, x_grid: np.ndarray, length: float) -> np.ndarray:
    """Two-component orbital sampled on ``x_grid``, shape (len(x_grid), 2), unit L² norm."""
    values = _envelope(x_grid, spec, length)
    spinor = packet_spinor(spec.momentum, mass, spec.energy_sign)
    orbital = np.outer(values, spinor)
    dx = float(x_grid[1] - x_grid[0])
    norm = np.sqrt(np.sum(np.abs(orbital) ** 2) * dx)
    if norm == 0.0:
        raise DegenerateOrbitals("orbital vanishes on the grid")
    return orbital / norm


def check_gram(orbitals: np.ndarray, weight: float = 1.0) -> np.ndarray:
    """Gram matrix of the rows of ``orbitals``; raises when they are linearly dependent."""
    flat = orbitals.reshape(orbitals.shape[0], -1)
    gram = weight * (flat.conj() @ flat.T)
    eigenvalues = np.linalg.eigvalsh(gram)
    if eigenvalues[0] <= GRAM_TOLERANCE * max(eigenvalues[-1], GRAM_TOLERANCE):
        raise DegenerateOrbitals(
            f"orbital Gram matrix is singular (smallest eigenvalue {eigenvalues[0]:.3e})",
            details={"gram_eigenvalues": eigenvalues.tolist()},
        )
    return gram


def slater_amplitudes(basis: SectorBasis, orbitals: np.ndarray) -> np.ndarray:
    """Normalized Ψ(c) = det[φ_a(c_b)] over every sector configuration c.

    ``orbitals`` has shape (ω, 2N); the orbitals need not be orthogonal.
    """
    orbitals = np.asarray(orbitals, dtype=complex)
    if orbitals.shape != (basis.quanta, basis.sites):
        raise ValidationError(f"expected orbitals of shape {(basis.quanta, basis.sites)}, got {orbitals.shape}")
    if basis.quanta == 0:
        return np.ones(1, dtype=complex)
    check_gram(orbitals)
    # (D, ω, ω) batch of orbital-by-occupied-site matrices
    blocks = np.transpose(orbitals[:, basis.configurations], (1, 0, 2))
    amplitudes = np.linalg.det(blocks)
    norm = float(np.linalg.norm(amplitudes))
    if norm <= GRAM_TOLERANCE:
        raise DegenerateOrbitals("antisymmetrized state vanishes")
    return amplitudes / norm


def build_initial_packet(basis: SectorBasis, spec: PacketSpec, time: float = 0.0) -> StateVector:
    """Slater determinant of the per-quantum Gaussian spinor orbitals, normalized."""
    if len(spec.orbitals) != basis.quanta:
        raise ValidationError(
            f"packet lists {len(spec.orbitals)} orbitals but the sector holds {basis.quanta} quanta"
        )
    rows = []
    for orbital_spec in spec.orbitals:
        row = lattice_orbital(orbital_spec, basis.params)
        norm = np.linalg.norm(row)
        if norm == 0.0:
            raise DegenerateOrbitals(f"orbital {orbital_spec} vanishes on the lattice")
        rows.append(row / norm)
    orbitals = np.array(rows).reshape(basis.quanta, basis.sites)
    amplitudes = slater_amplitudes(basis, orbitals)
    logger.debug(f"Built initial packet over {basis.dimension} configurations")
    return StateVector(amplitudes, time)


def superposed_packet(basis: SectorBasis, orbitals: Sequence[OrbitalSpec], time: float = 0.0) -> StateVector:
    """One quantum in an equal-weight superposition of separately normalized Gaussian orbitals.

    Counter-propagating orbitals give a guidance velocity that changes sign where
    the two packets meet.
    """
    if basis.quanta != 1:
        raise ValidationError(f"a superposed packet holds one quantum, the sector holds {basis.quanta}")
    if not orbitals:
        raise ValidationError("a superposed packet needs at least one orbital")
    row = np.zeros(basis.sites, dtype=complex)
    for orbital_spec in orbitals:
        orbital = lattice_orbital(orbital_spec, basis.params)
        norm = np.linalg.norm(orbital)
        if norm == 0.0:
            raise DegenerateOrbitals(f"orbital {orbital_spec} vanishes on the lattice")
        row += orbital / norm
    amplitudes = row[basis.configurations[:, 0]]
    norm = float(np.linalg.norm(amplitudes))
    if norm <= GRAM_TOLERANCE:
        raise DegenerateOrbitals("superposed orbitals cancel")
    return StateVector(amplitudes / norm, time)


def state_from_configuration(basis: SectorBasis, config: Sequence[int], time: float = 0.0) -> StateVector:
    """Pilot-state concentrated on a single configuration."""
    amplitudes = np.zeros(basis.dimension, dtype=complex)
    amplitudes[basis.rank(config)] = 1.0
    return StateVector(amplitudes, time)
