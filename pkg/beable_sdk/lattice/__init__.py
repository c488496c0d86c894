"""
Staggered lattice: sector basis, Hamiltonian and dispersion.
"""

from .basis import Configuration, SectorBasis, enumerate_sector, sector_dimension
from .dispersion import (
    dispersion,
    doubling_report,
    expected_spectrum,
    naive_dirac_matrix,
    reduced_momenta,
    single_particle_matrix,
    single_particle_spectrum,
)
from .hamiltonian import SectorHamiltonian, assemble_hamiltonian

__all__ = [
    "Configuration",
    "SectorBasis",
    "enumerate_sector",
    "sector_dimension",
    "SectorHamiltonian",
    "assemble_hamiltonian",
    "dispersion",
    "doubling_report",
    "expected_spectrum",
    "naive_dirac_matrix",
    "reduced_momenta",
    "single_particle_matrix",
    "single_particle_spectrum",
]
