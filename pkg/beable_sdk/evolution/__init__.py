"""
Pilot-state evolution in the fixed fermion-number sector.
"""

from .interaction import contact_interaction_term
from .packets import (
    build_initial_packet,
    continuum_orbital,
    lattice_orbital,
    slater_amplitudes,
    state_from_configuration,
    superposed_packet,
)
from .propagator import (
    EvolutionDiagnostics,
    PilotTimeline,
    Propagator,
    StateVector,
    conservation_drifts,
    energy,
    evolve,
)

__all__ = [
    "StateVector",
    "Propagator",
    "PilotTimeline",
    "EvolutionDiagnostics",
    "evolve",
    "energy",
    "conservation_drifts",
    "build_initial_packet",
    "state_from_configuration",
    "superposed_packet",
    "lattice_orbital",
    "continuum_orbital",
    "slater_amplitudes",
    "contact_interaction_term",
]
