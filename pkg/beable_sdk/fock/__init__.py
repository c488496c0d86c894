"""
Exact finite-mode fermionic Fock-space algebra.
"""

from .commutator import CommutatorResult, commutator_summary, pair_creation_element, smeared_density_commutator
from .operators import (
    DEFAULT_MODE_CAP,
    Mode,
    ModeSet,
    OperatorMatrix,
    anticommutator,
    build_mode_operators,
    build_site_operators,
    commutator,
    number_operator,
)
from .oracle import fermion_number, oracle_sector_hamiltonian, restrict_to_sector
from .spinors import SpinorBasis, dirac_spinors, packet_spinor

__all__ = [
    "DEFAULT_MODE_CAP",
    "Mode",
    "ModeSet",
    "OperatorMatrix",
    "anticommutator",
    "commutator",
    "build_mode_operators",
    "build_site_operators",
    "number_operator",
    "SpinorBasis",
    "dirac_spinors",
    "packet_spinor",
    "CommutatorResult",
    "smeared_density_commutator",
    "commutator_summary",
    "pair_creation_element",
    "oracle_sector_hamiltonian",
    "fermion_number",
    "restrict_to_sector",
]
