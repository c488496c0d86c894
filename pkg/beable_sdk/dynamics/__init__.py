"""
Bell's stochastic beable dynamics: currents, rates, trajectories, master equation.
"""

from .currents import (
    PROBABILITY_FLOOR,
    GeneratorTable,
    JumpRateTable,
    TransitionCurrents,
    build_generator_table,
    current_matrix,
    jump_rates,
    rate_matrix,
    transition_currents,
)
from .equivariance import equivariance_statistics, noise_bound
from .master import MasterTimeline, ProbabilityVector, master_equation_evolve
from .trajectories import (
    EnsembleResult,
    JumpEvent,
    Trajectory,
    sample_configurations,
    simulate_ensemble,
    simulate_trajectory,
    substep_grid,
)

__all__ = [
    "PROBABILITY_FLOOR",
    "GeneratorTable",
    "TransitionCurrents",
    "JumpRateTable",
    "build_generator_table",
    "current_matrix",
    "rate_matrix",
    "transition_currents",
    "jump_rates",
    "Trajectory",
    "JumpEvent",
    "EnsembleResult",
    "simulate_trajectory",
    "simulate_ensemble",
    "sample_configurations",
    "substep_grid",
    "ProbabilityVector",
    "MasterTimeline",
    "master_equation_evolve",
    "equivariance_statistics",
    "noise_bound",
]
