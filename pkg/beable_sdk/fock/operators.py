"""
Fermionic creation and annihilation operators as dense Fock-space matrices.

The occupation basis of M modes is the Kronecker product of M two-level
spaces; mode 0 is the most significant factor, so basis index
``sum(n_i << (M - 1 - i))`` holds the occupation pattern ``(n_0, ..., n_{M-1})``.
A state ``a†_{k1} ... a†_{kω} |0⟩`` with ascending ``k`` equals the matching
occupation basis vector with sign +1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..exceptions import ModeCapExceeded, ValidationError
from ..models.types import Species

logger = logging.getLogger(__name__)

DEFAULT_MODE_CAP = 8

_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # occupied -> empty
_PARITY = np.diag([1, -1]).astype(complex)
_IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True, order=True)
class Mode:
    """One momentum mode. Ordering is by (species, momentum)."""

    species: Species
    momentum: float


@dataclass(frozen=True)
class ModeSet:
    """Finite set of electron/positron momentum modes."""

    modes: Tuple[Mode, ...]
    mass: float
    momentum_spacing: float
    cap: int = DEFAULT_MODE_CAP

    def __post_init__(self) -> None:
        if len(self.modes) > self.cap:
            raise ModeCapExceeded(
                f"{len(self.modes)} modes exceed the cap of {self.cap}",
                details={"modes": len(self.modes), "cap": self.cap},
            )
        if self.momentum_spacing <= 0:
            raise ValidationError("momentum spacing must be positive")
        for species in Species:
            momenta = [m.momentum for m in self.modes if m.species is species]
            if len(set(momenta)) != len(momenta):
                raise ValidationError(f"duplicate {species.value} momenta: {momenta}")
        object.__setattr__(self, "modes", tuple(sorted(self.modes)))

    @classmethod
    def from_momenta(
        cls,
        electrons: Sequence[float],
        positrons: Sequence[float],
        mass: float,
        momentum_spacing: float,
        cap: int = DEFAULT_MODE_CAP,
    ) -> "ModeSet":
        modes = [Mode(Species.ELECTRON, float(p)) for p in electrons]
        modes += [Mode(Species.POSITRON, float(p)) for p in positrons]
        return cls(tuple(modes), mass=mass, momentum_spacing=momentum_spacing, cap=cap)

    @property
    def count(self) -> int:
        return len(self.modes)

    @property
    def dimension(self) -> int:
        return 1 << len(self.modes)

    def index(self, mode: Mode) -> int:
        return self.modes.index(mode)

    def of_species(self, species: Species) -> List[Mode]:
        return [m for m in self.modes if m.species is species]


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense Fock-space matrix with a descriptive label."""

    matrix: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self) -> None:
        rows, cols = self.matrix.shape
        if rows != cols or rows < 1 or rows & (rows - 1):
            raise ValidationError(f"operator {self.label!r} has non power-of-two shape {self.matrix.shape}")

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def modes(self) -> int:
        return self.dimension.bit_length() - 1

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.matrix.conj().T, label=f"{self.label}†")

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.matrix @ other.matrix, label=f"{self.label}·{other.label}")

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.matrix + other.matrix, label=f"{self.label}+{other.label}")


def anticommutator(a: OperatorMatrix, b: OperatorMatrix) -> np.ndarray:
    return a.matrix @ b.matrix + b.matrix @ a.matrix


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> np.ndarray:
    return a.matrix @ b.matrix - b.matrix @ a.matrix


def jordan_wigner_annihilators(count: int, cap: int = DEFAULT_MODE_CAP) -> List[np.ndarray]:
    """Annihilators of ``count`` fermionic modes via the parity-string construction.

    Entries are exactly 0 or ±1.
    """
    if count > cap:
        raise ModeCapExceeded(
            f"Fock space of {count} modes (dimension 2^{count}) exceeds the cap of {cap} modes",
            details={"modes": count, "cap": cap},
        )
    logger.debug(f"Building {count} Jordan-Wigner annihilators (dimension {1 << count})")
    annihilators = []
    for j in range(count):
        factors = [_PARITY] * j + [_LOWER] + [_IDENTITY] * (count - j - 1)
        annihilators.append(reduce(np.kron, factors, np.ones((1, 1), dtype=complex)))
    return annihilators


def build_mode_operators(modes: ModeSet) -> Dict[Mode, Tuple[OperatorMatrix, OperatorMatrix]]:
    """Map each mode to its (annihilator, creator) pair, ordered by (species, momentum)."""
    operators: Dict[Mode, Tuple[OperatorMatrix, OperatorMatrix]] = {}
    for mode, a in zip(modes.modes, jordan_wigner_annihilators(modes.count, modes.cap)):
        name = "c" if mode.species is Species.ELECTRON else "d"
        annihilator = OperatorMatrix(a, label=f"{name}({mode.momentum:g})")
        operators[mode] = (annihilator, annihilator.dagger())
    return operators


def build_site_operators(sites: int, cap: int = DEFAULT_MODE_CAP) -> List[OperatorMatrix]:
    """Position-mode annihilators φ(n), n = 0..sites-1, ordered by site index."""
    return [
        OperatorMatrix(a, label=f"φ({n})")
        for n, a in enumerate(jordan_wigner_annihilators(sites, cap))
    ]


def number_operator(annihilators: Sequence[OperatorMatrix], label: str = "F") -> OperatorMatrix:
    """Σ a†_i a_i over the given annihilators."""
    if not annihilators:
        raise ValidationError("number operator needs at least one mode")
    dim = annihilators[0].dimension
    total = np.zeros((dim, dim), dtype=complex)
    for a in annihilators:
        total += a.matrix.conj().T @ a.matrix
    return OperatorMatrix(total, label=label)


def occupation_numbers(dimension: int) -> np.ndarray:
    """Total occupation of every Fock basis state (popcount of the index)."""
    indices = np.arange(dimension)
    return np.array([bin(i).count("1") for i in indices], dtype=int)


def vacuum(dimension: int) -> np.ndarray:
    """All-empty occupation state: the positronic sea in the position-mode picture."""
    state = np.zeros(dimension, dtype=complex)
    state[0] = 1.0
    return state
