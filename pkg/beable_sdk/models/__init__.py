"""
Data models for the Bell lattice beables SDK.
"""

from .manifest import CheckResult, FileRecord, RunManifest, build_output_name
from .types import (
    CheckpointStatistics,
    ConvergenceReport,
    DispersionPoint,
    DoublingReport,
    EnergySign,
    EquivarianceReport,
    EvolutionConfig,
    IntegratorMethod,
    LatticeParams,
    LevelMultiplicity,
    OrbitalSpec,
    PacketSpec,
    ResolutionResult,
    Species,
)

__all__ = [
    "LatticeParams",
    "OrbitalSpec",
    "PacketSpec",
    "EvolutionConfig",
    "IntegratorMethod",
    "EnergySign",
    "Species",
    "DispersionPoint",
    "LevelMultiplicity",
    "DoublingReport",
    "CheckpointStatistics",
    "EquivarianceReport",
    "ResolutionResult",
    "ConvergenceReport",
    "CheckResult",
    "FileRecord",
    "RunManifest",
    "build_output_name",
]
