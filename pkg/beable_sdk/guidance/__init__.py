"""
Continuum limit: spinor merging, guidance law, convergence and non-locality.
"""

from .convergence import convergence_study, evaluate_convergence, run_resolution
from .current import GuidanceField, continuity_residual, current_density, guidance_field
from .integrate import (
    GuidanceTimeline,
    GuidanceTrajectory,
    integrate_guidance,
    periodic_distance,
    time_reversed,
)
from .nonlocality import NonlocalityReport, four_term_current, nonlocality_analysis, nonlocality_from_specs
from .spinor_field import SpinorField, sector_to_spinor, staggered_to_spinor
from .velocity import (
    CancellationResult,
    bond_currents,
    current_cancellation_check,
    lattice_velocity,
    merged_lattice_current,
    plane_wave,
    velocity_table,
)

__all__ = [
    "SpinorField",
    "staggered_to_spinor",
    "sector_to_spinor",
    "GuidanceField",
    "guidance_field",
    "current_density",
    "continuity_residual",
    "lattice_velocity",
    "current_cancellation_check",
    "CancellationResult",
    "bond_currents",
    "merged_lattice_current",
    "plane_wave",
    "velocity_table",
    "GuidanceTimeline",
    "GuidanceTrajectory",
    "integrate_guidance",
    "time_reversed",
    "periodic_distance",
    "convergence_study",
    "evaluate_convergence",
    "run_resolution",
    "NonlocalityReport",
    "nonlocality_analysis",
    "nonlocality_from_specs",
    "four_term_current",
]
