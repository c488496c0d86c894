"""
Bell lattice beables SDK

Stochastic beable dynamics for staggered lattice fermions in a fixed
fermion-number sector, its continuum guidance limit, and an exact Fock-space
oracle for cross-checks.
"""

from importlib import metadata as _metadata

from .exceptions import (
    BeableError,
    DegenerateOrbitals,
    GridMismatch,
    ModeCapExceeded,
    NodeReached,
    NormDrift,
    OddSiteCount,
    OutOfGrid,
    RateStepOverflow,
    SectorTooLarge,
    SourceProbabilityUnderflow,
    StepTooLarge,
    ValidationError,
)
from .lattice import SectorBasis, SectorHamiltonian, assemble_hamiltonian, enumerate_sector
from .models.types import EvolutionConfig, LatticeParams, OrbitalSpec, PacketSpec
from .evolution import Propagator, StateVector, build_initial_packet, evolve

try:
    __version__ = _metadata.version("bell-lattice-beables")
except _metadata.PackageNotFoundError:
    __version__ = "0.3.0"

__all__ = [
    "BeableError",
    "ValidationError",
    "ModeCapExceeded",
    "GridMismatch",
    "SectorTooLarge",
    "StepTooLarge",
    "NormDrift",
    "DegenerateOrbitals",
    "SourceProbabilityUnderflow",
    "RateStepOverflow",
    "OddSiteCount",
    "OutOfGrid",
    "NodeReached",
    "LatticeParams",
    "OrbitalSpec",
    "PacketSpec",
    "EvolutionConfig",
    "SectorBasis",
    "SectorHamiltonian",
    "enumerate_sector",
    "assemble_hamiltonian",
    "StateVector",
    "Propagator",
    "evolve",
    "build_initial_packet",
]

# Lazy expose heavier subpackages under beable_sdk.<name>
from importlib import import_module as _import_module  # noqa: E402

_LAZY = {"fock", "dynamics", "guidance"}


def __getattr__(name):
    if name in _LAZY:
        return _import_module(f"beable_sdk.{name}")
    raise AttributeError(name)
