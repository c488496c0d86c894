"""
Smeared fermion-number density versus particle number.

The 1+1D field on a periodic grid of length L = M_x·Δx is expanded as

    ψ(x) = L^{-1/2} Σ_p √(m/E_p) [u(p) e^{ipx} c(p) + v(p) e^{-ipx} d†(p)]

over the momenta of a :class:`ModeSet`. The smeared density
D_f = Σ_x Δx f(x) ψ†(x)ψ(x) commutes with the fermion number but not with the
particle number N = Σ c†c + Σ d†d; its pair-creation part survives.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..exceptions import GridMismatch, ValidationError
from ..models.types import Species
from .operators import Mode, ModeSet, OperatorMatrix, build_mode_operators, commutator, number_operator
from .spinors import SpinorBasis, dirac_spinors

logger = logging.getLogger(__name__)

GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CommutatorResult:
    """Commutator [D_f, N] with its pair-creation element."""

    commutator: OperatorMatrix
    density: OperatorMatrix
    particle_number: OperatorMatrix
    pair: Tuple[float, float]
    pair_element: complex
    closed_form: complex
    coefficients: np.ndarray = field(repr=False)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.commutator.matrix)))


def _check_grid(x_grid: np.ndarray, modes: ModeSet) -> float:
    if x_grid.ndim != 1 or x_grid.size < 2:
        raise GridMismatch("x-grid must be a one-dimensional array with at least two points")
    steps = np.diff(x_grid)
    dx = float(steps[0])
    if dx <= 0 or not np.allclose(steps, dx, rtol=0.0, atol=GRID_TOLERANCE):
        raise GridMismatch("x-grid must be uniform and increasing")
    product = dx * modes.momentum_spacing * x_grid.size
    if abs(product - 2.0 * math.pi) > GRID_TOLERANCE:
        raise GridMismatch(
            f"Δx·Δp·M_x = {product:.12g} differs from 2π",
            details={"dx": dx, "dp": modes.momentum_spacing, "points": int(x_grid.size)},
        )
    for mode in modes.modes:
        multiple = mode.momentum / modes.momentum_spacing
        if abs(multiple - round(multiple)) > GRID_TOLERANCE:
            raise GridMismatch(f"momentum {mode.momentum} is not a multiple of Δp = {modes.momentum_spacing}")
    return dx


def _spinor(spinors: Mapping[float, SpinorBasis], p: float, m: float) -> SpinorBasis:
    return spinors[p] if p in spinors else dirac_spinors(p, m)


def mode_functions(
    x_grid: np.ndarray,
    modes: ModeSet,
    spinors: Optional[Mapping[float, SpinorBasis]] = None,
) -> np.ndarray:
    """Spinor coefficient w_i(x) of each field operator B_i in ψ(x) = Σ_i w_i(x) B_i.

    B_i is c(p) for electron modes and d†(p) for positron modes. Shape (M, M_x, 2).
    """
    spinors = spinors or {}
    m = modes.mass
    length = x_grid.size * (x_grid[1] - x_grid[0])
    coefficients = np.zeros((modes.count, x_grid.size, 2), dtype=complex)
    for i, mode in enumerate(modes.modes):
        basis = _spinor(spinors, mode.momentum, m)
        weight = math.sqrt(m / basis.energy) / math.sqrt(length)
        if mode.species is Species.ELECTRON:
            phase = np.exp(1j * mode.momentum * x_grid)
            coefficients[i] = weight * np.outer(phase, basis.u)
        else:
            phase = np.exp(-1j * mode.momentum * x_grid)
            coefficients[i] = weight * np.outer(phase, basis.v)
    return coefficients


def pair_creation_element(
    f: np.ndarray,
    x_grid: np.ndarray,
    p: float,
    k: float,
    mass: float,
) -> complex:
    """Closed form of ⟨0|[D_f, N]|d†(k)c†(p)|0⟩.

    Only the d(k)c(p) term of D_f connects the pair to the vacuum, and N = 2 on the pair:
    -(2/L)(m/√(E_p E_k)) v†(k)u(p) Σ_x Δx f(x) e^{i(p+k)x}.
    """
    dx = float(x_grid[1] - x_grid[0])
    length = dx * x_grid.size
    sp, sk = dirac_spinors(p, mass), dirac_spinors(k, mass)
    overlap = np.vdot(sk.v, sp.u)
    smeared = np.sum(dx * f * np.exp(1j * (p + k) * x_grid))
    return complex(-(2.0 / length) * mass / math.sqrt(sp.energy * sk.energy) * overlap * smeared)


def smeared_density_commutator(
    f: np.ndarray,
    x_grid: np.ndarray,
    modes: ModeSet,
    spinors: Optional[Mapping[float, SpinorBasis]] = None,
    pair: Optional[Tuple[float, float]] = None,
) -> CommutatorResult:
    """[Σ_x Δx f(x) ψ†(x)ψ(x), N] as a Fock-space matrix.

    ``pair`` is the (electron, positron) momentum pair whose vacuum matrix
    element is reported; defaults to the largest momentum present for both species.
    """
    f = np.asarray(f, dtype=float)
    x_grid = np.asarray(x_grid, dtype=float)
    if f.shape != x_grid.shape:
        raise GridMismatch(f"f has shape {f.shape} but the grid has {x_grid.shape}")
    dx = _check_grid(x_grid, modes)

    operators = build_mode_operators(modes)
    field_ops: List[np.ndarray] = []
    for mode in modes.modes:
        annihilator, creator = operators[mode]
        field_ops.append(annihilator.matrix if mode.species is Species.ELECTRON else creator.matrix)

    w = mode_functions(x_grid, modes, spinors)
    # K_ij = Σ_x Δx f(x) w_i(x)† w_j(x)
    kernel = np.einsum("x,ixs,jxs->ij", dx * f, w.conj(), w)

    dim = modes.dimension
    density = np.zeros((dim, dim), dtype=complex)
    for i, bi in enumerate(field_ops):
        bi_dag = bi.conj().T
        for j, bj in enumerate(field_ops):
            if kernel[i, j] != 0:
                density += kernel[i, j] * (bi_dag @ bj)

    electrons = [operators[m][0] for m in modes.of_species(Species.ELECTRON)]
    positrons = [operators[m][0] for m in modes.of_species(Species.POSITRON)]
    particle_number = number_operator(electrons + positrons, label="N")
    density_op = OperatorMatrix(density, label="D_f")
    result = OperatorMatrix(commutator(density_op, particle_number), label="[D_f,N]")

    if pair is None:
        if not electrons or not positrons:
            raise ValidationError("the pair-creation element needs at least one electron and one positron mode")
        pair = (
            max(m.momentum for m in modes.of_species(Species.ELECTRON)),
            max(m.momentum for m in modes.of_species(Species.POSITRON)),
        )
    p, k = pair
    try:
        c_dag = operators[Mode(Species.ELECTRON, float(p))][1].matrix
        d_dag = operators[Mode(Species.POSITRON, float(k))][1].matrix
    except KeyError as e:
        raise ValidationError(f"pair momenta {pair} are not modes of the set") from e
    vacuum = np.zeros(dim, dtype=complex)
    vacuum[0] = 1.0
    pair_state = d_dag @ (c_dag @ vacuum)
    element = complex(vacuum.conj() @ (result.matrix @ pair_state))
    closed = pair_creation_element(f, x_grid, p, k, modes.mass)

    logger.debug(
        f"Smeared density commutator over {modes.count} modes: "
        f"max |C| = {np.max(np.abs(result.matrix)):.3e}, pair element {element:.3e}"
    )
    return CommutatorResult(
        commutator=result,
        density=density_op,
        particle_number=particle_number,
        pair=(float(p), float(k)),
        pair_element=element,
        closed_form=closed,
        coefficients=kernel,
    )


def commutator_summary(result: CommutatorResult) -> Dict[str, float]:
    return {
        "max_abs_commutator": result.max_abs,
        "pair_modulus": abs(result.pair_element),
        "closed_form_modulus": abs(result.closed_form),
        "closed_form_deviation": abs(result.pair_element - result.closed_form),
    }
