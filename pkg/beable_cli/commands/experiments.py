"""
Registered experiments. Each one writes its CSV tables through the run
context and records the physics checks that decide the exit code.
"""

import logging
import math

import numpy as np

from beable_sdk.dynamics import (
    ProbabilityVector,
    equivariance_statistics,
    master_equation_evolve,
    simulate_ensemble,
)
from beable_sdk.evolution import Propagator, build_initial_packet, conservation_drifts, energy
from beable_sdk.evolution.packets import periodic_displacement
from beable_sdk.fock import (
    DEFAULT_MODE_CAP,
    ModeSet,
    anticommutator,
    build_mode_operators,
    commutator_summary,
    oracle_sector_hamiltonian,
    restrict_to_sector,
    smeared_density_commutator,
)
from beable_sdk.guidance import (
    convergence_study,
    current_cancellation_check,
    nonlocality_from_specs,
    velocity_table,
)
from beable_sdk.guidance.convergence import HALVING_BAND
from beable_sdk.lattice import assemble_hamiltonian, dispersion, doubling_report, enumerate_sector, reduced_momenta
from beable_sdk.lattice.dispersion import spectrum_rows
from beable_sdk.models.types import LatticeParams, PacketSpec

from beable_cli.core.config import RunConfig
from beable_cli.core.registry import experiment
from beable_cli.core.runner import Column, RunContext

logger = logging.getLogger(__name__)

SPECTRUM_TOLERANCE = 1e-10
ORACLE_TOLERANCE = 1e-12
HERMITICITY_TOLERANCE = 1e-12
NORM_DRIFT_TOLERANCE = 1e-10
ENERGY_DRIFT_TOLERANCE = 1e-8
FOUR_TERM_TOLERANCE = 1e-10
CLOSED_FORM_TOLERANCE = 1e-10
PAIR_ELEMENT_MINIMUM = 1e-6
CONSTANT_SMEARING_TOLERANCE = 1e-10
ANTICOMMUTATOR_TOLERANCE = 1e-12


def _sector(config: RunConfig):
    params = config.lattice
    basis = enumerate_sector(params)
    hamiltonian = assemble_hamiltonian(params, basis)
    state = build_initial_packet(basis, PacketSpec(orbitals=config.packets))
    return basis, hamiltonian, state


def _site_columns(quanta: int):
    return [Column(f"site_{i + 1}", f"Occupied site of quantum {i + 1} (ordered)", "site") for i in range(quanta)]


def _even_site(position: float, params: LatticeParams) -> int:
    site = int(round(position / params.spacing)) % params.sites
    return site - site % 2


@experiment("spectrum", help="Single-particle eigenvalues against ±E_lat(p) over the reduced momenta.")
def spectrum(config: RunConfig, context: RunContext) -> None:
    params = config.lattice.model_copy(update={"quanta": 1, "coupling": 0.0})
    levels, expected = spectrum_rows(params)
    deviation = np.abs(levels - expected)

    context.write_table(
        "levels",
        [
            Column("index", "Level index in ascending order"),
            Column("energy", "Eigenvalue of the one-quantum sector Hamiltonian", "energy"),
            Column("expected", "Closed form ±sqrt(sin²(pδ)/δ² + m²)", "energy"),
            Column("deviation", "|energy - expected|", "energy"),
        ],
        ([i, e, x, d] for i, (e, x, d) in enumerate(zip(levels, expected, deviation))),
    )
    context.write_table(
        "dispersion",
        [
            Column("p", "Reduced momentum πj/(Nδ)", "1/length"),
            Column("p_lat", "Lattice momentum sin(pδ)/δ", "1/length"),
            Column("e_lat", "Lattice energy sqrt(p_lat² + m²)", "energy"),
        ],
        ([pt.p, pt.p_lat, pt.e_lat] for pt in (dispersion(p, params) for p in reduced_momenta(params))),
    )
    context.check(
        "spectrum_matches_dispersion",
        float(deviation.max()) <= SPECTRUM_TOLERANCE,
        value=float(deviation.max()),
        threshold=SPECTRUM_TOLERANCE,
    )


@experiment("doubling", help="Level counting of the staggered spectrum against the naive lattice Dirac operator.")
def doubling(config: RunConfig, context: RunContext) -> None:
    params = config.lattice.model_copy(update={"quanta": 1, "coupling": 0.0})
    report = doubling_report(params)

    context.write_table(
        "levels",
        [
            Column("energy", "Signed single-particle level", "energy"),
            Column("staggered", "Multiplicity on the staggered lattice"),
            Column("naive", "Multiplicity of the naive two-component lattice operator"),
        ],
        ([level.energy, level.staggered, level.naive] for level in report.naive_degeneracy.values()),
    )
    context.record(
        positive_levels=report.positive_levels,
        negative_levels=report.negative_levels,
        zero_levels=report.zero_levels,
        max_naive_multiplicity=report.max_naive_multiplicity,
        massless_zero_modes=report.massless_zero_modes,
    )

    cells = params.cells
    if params.mass > 0:
        context.check(
            "positive_levels",
            report.positive_levels == cells,
            value=report.positive_levels,
            threshold=cells,
            comparison="==",
        )
        context.check(
            "negative_levels",
            report.negative_levels == cells,
            value=report.negative_levels,
            threshold=cells,
            comparison="==",
        )
    else:
        context.check(
            "positive_levels",
            None,
            value=report.positive_levels,
            message=f"m = 0: {report.zero_levels} zero level(s); the N/N split needs m > 0",
        )
    context.check(
        "staggered_multiplicity",
        report.max_staggered_multiplicity <= 2,
        value=report.max_staggered_multiplicity,
        threshold=2,
    )
    context.check(
        "dispersion_error",
        report.max_dispersion_error <= SPECTRUM_TOLERANCE,
        value=report.max_dispersion_error,
        threshold=SPECTRUM_TOLERANCE,
    )


@experiment("evolve", help="Pilot-state evolution with norm and energy conservation checks.")
def evolve(config: RunConfig, context: RunContext) -> None:
    basis, hamiltonian, state = _sector(config)
    params = config.lattice

    context.check(
        "hermiticity",
        hamiltonian.hermiticity_defect() <= HERMITICITY_TOLERANCE,
        value=hamiltonian.hermiticity_defect(),
        threshold=HERMITICITY_TOLERANCE,
    )
    if params.sites <= DEFAULT_MODE_CAP:
        oracle = restrict_to_sector(oracle_sector_hamiltonian(params), params.sites, params.quanta)
        gap = float(np.max(np.abs(hamiltonian.dense() - oracle))) if oracle.size else 0.0
        context.check("fock_oracle_agreement", gap <= ORACLE_TOLERANCE, value=gap, threshold=ORACLE_TOLERANCE)

    times = np.linspace(0.0, config.horizon, config.samples) if config.samples > 1 else np.array([0.0])
    propagator = Propagator(hamiltonian, config.evolution)
    timeline = propagator.timeline(state, times)
    densities = timeline.probabilities() @ basis.occupations()
    norms = np.linalg.norm(timeline.frames, axis=1)
    energies = [energy(timeline.state(i), hamiltonian) for i in range(len(timeline))]

    columns = [
        Column("time", "Evolution time", "time"),
        Column("norm", "‖Ψ(t)‖", ""),
        Column("energy", "⟨Ψ(t)|H|Ψ(t)⟩", "energy"),
    ]
    columns += [Column(f"density_{k}", f"Occupation probability of site {k}") for k in range(params.sites)]
    context.write_table(
        "timeline",
        columns,
        ([t, n, e, *rho] for t, n, e, rho in zip(timeline.times, norms, energies, densities)),
    )

    drifts = conservation_drifts(timeline, hamiltonian)
    context.record(dimension=basis.dimension, method=propagator.method.value)
    context.check(
        "norm_drift",
        drifts["max_norm_drift"] <= NORM_DRIFT_TOLERANCE,
        value=drifts["max_norm_drift"],
        threshold=NORM_DRIFT_TOLERANCE,
    )
    context.check(
        "energy_drift",
        drifts["max_energy_drift"] <= ENERGY_DRIFT_TOLERANCE,
        value=drifts["max_energy_drift"],
        threshold=ENERGY_DRIFT_TOLERANCE,
    )


@experiment("trajectories", help="Sample beable trajectories and write their site histories and jump logs.")
def trajectories(config: RunConfig, context: RunContext) -> None:
    basis, hamiltonian, state = _sector(config)
    settings = config.trajectories
    ensemble = simulate_ensemble(
        hamiltonian,
        state,
        config.horizon,
        settings.dt,
        count=settings.count,
        seed=config.seed,
        evolution=config.evolution,
        threads=config.threads,
        record_every=settings.record_every,
    )
    quanta = basis.quanta

    def path_rows():
        for i, trajectory in enumerate(ensemble.trajectories):
            for t, occupied, jumped in zip(trajectory.times, trajectory.configurations(basis), trajectory.jumped):
                yield [i, t, *occupied, jumped]

    context.write_table(
        "paths",
        [Column("trajectory", "Trajectory number"), Column("time", "Sample time", "time")]
        + _site_columns(quanta)
        + [Column("jumped", "1 if the configuration changed since the previous sample")],
        path_rows(),
    )
    context.write_table(
        "jumps",
        [
            Column("trajectory", "Trajectory number"),
            Column("time", "Start of the substep in which the jump happened", "time"),
            Column("moved_from", "Site the quantum left", "site"),
            Column("moved_to", "Site the quantum entered", "site"),
            Column("direction", "+1 rightward, -1 leftward"),
        ],
        (
            [i, jump.time, jump.moved_from, jump.moved_to, jump.direction]
            for i, trajectory in enumerate(ensemble.trajectories)
            for jump in trajectory.jumps
        ),
    )

    sites = basis.sites
    hops = [
        (jump.moved_to - jump.moved_from) % sites
        for trajectory in ensemble.trajectories
        for jump in trajectory.jumps
    ]
    non_adjacent = sum(1 for h in hops if h not in (1, sites - 1))
    context.record(total_jumps=ensemble.total_jumps, effective_dt=ensemble.dt)
    context.check("nearest_neighbour_jumps", non_adjacent == 0, value=non_adjacent, threshold=0)


@experiment("equivariance", help="Ensemble histograms against |Ψ(t)|² at the checkpoints.")
def equivariance(config: RunConfig, context: RunContext) -> None:
    basis, hamiltonian, state = _sector(config)
    settings = config.trajectories
    ensemble = simulate_ensemble(
        hamiltonian,
        state,
        config.horizon,
        settings.dt,
        count=settings.count,
        seed=config.seed,
        evolution=config.evolution,
        threads=config.threads,
        record_every=settings.record_every,
    )
    report = equivariance_statistics(ensemble, settings.checkpoints, settings.z_threshold)

    context.write_table(
        "checkpoints",
        [
            Column("checkpoint", "Checkpoint time", "time"),
            Column("tv_distance", "Total variation distance of the histogram from |Ψ(t)|²"),
            Column("noise_bound", "3·sqrt(dim/(2n)) multinomial bound"),
            Column("max_abs_z", "Largest per-configuration z-score"),
            Column("z_exceed_fraction", "Fraction of configurations beyond the z threshold"),
            Column("trajectories", "Ensemble size"),
        ],
        (
            [c.time, c.tv_distance, c.noise_bound, c.max_abs_z, c.z_exceed_fraction, c.trajectories]
            for c in report.checkpoints
        ),
    )
    context.record(dimension=report.dimension, total_jumps=ensemble.total_jumps, within_noise=report.within_noise)
    for c in report.checkpoints:
        context.check(
            f"tv_distance@t={c.time:g}",
            c.tv_distance <= settings.tv_tolerance,
            value=c.tv_distance,
            threshold=settings.tv_tolerance,
        )
        context.check(
            f"support@t={c.time:g}",
            math.isfinite(c.max_abs_z),
            value=c.max_abs_z,
            message="trajectories found where |Ψ|² vanishes" if not math.isfinite(c.max_abs_z) else None,
        )
        context.check(
            f"z_exceed@t={c.time:g}",
            c.z_exceed_fraction < settings.z_exceed_limit,
            value=c.z_exceed_fraction,
            threshold=settings.z_exceed_limit,
            comparison="<",
        )


@experiment("master-equation", help="Master equation with the jump rates against the Schrödinger |Ψ(t)|².")
def master_equation(config: RunConfig, context: RunContext) -> None:
    basis, hamiltonian, state = _sector(config)
    settings = config.master
    if settings.quench > 0:
        initial = ProbabilityVector.quenched(state, settings.quench)
    else:
        initial = ProbabilityVector.from_state(state)
    result = master_equation_evolve(
        initial,
        hamiltonian,
        state,
        config.horizon,
        settings.dt,
        evolution=config.evolution,
        report_every=settings.report_every,
    )
    residuals = result.max_residuals
    context.write_table(
        "residuals",
        [
            Column("time", "Report time", "time"),
            Column("max_residual", "max over configurations of |P(t) - |Ψ(t)|²|"),
            Column("tv_distance", "Total variation distance between P(t) and |Ψ(t)|²"),
            Column("normalization_error", "|Σ P(t) - 1|"),
        ],
        zip(result.times, residuals, result.tv_distances, result.normalization_errors),
    )
    worst = float(np.max(residuals))
    context.record(dimension=basis.dimension, subdivisions=result.subdivisions)
    if settings.quench > 0:
        tv = result.tv_distances
        context.record(quench=settings.quench, initial_tv=float(tv[0]), final_tv=float(tv[-1]))
        context.check(
            "master_equation_residual",
            None,
            value=worst,
            message=f"quenched start (mixing {settings.quench:g}): TV(t) recorded, no convergence claim",
        )
        return
    context.check("master_equation_residual", worst <= settings.tolerance, value=worst, threshold=settings.tolerance)


@experiment("continuum-convergence", help="Jump process against the guidance ODE as δ shrinks.")
def continuum_convergence(config: RunConfig, context: RunContext) -> None:
    settings = config.convergence
    report = convergence_study(
        settings.packet,
        settings.resolutions,
        trials=settings.trials,
        horizon=settings.horizon,
        seed=config.seed,
        box_length=settings.box_length,
        mass=settings.mass,
        dt_fraction=settings.dt_fraction,
        evolution=config.evolution,
        threads=config.threads,
        partner=settings.partner,
    )
    context.write_table(
        "resolutions",
        [
            Column("two_n", "Number of staggered sites 2N"),
            Column("delta", "Lattice spacing δ", "length"),
            Column("mean_error", "Mean |X_jump(T) - X_guidance(T)| (periodic)", "length"),
            Column("backward_fraction", "Fraction of jumps against the guidance velocity"),
            Column("total_jumps", "Jumps counted over all trials"),
            Column("trials", "Trajectories per resolution"),
            Column("seed", "Seed of the resolution"),
        ],
        (
            [r.two_n, r.delta, r.mean_error, r.backward_fraction, r.total_jumps, r.trials, r.seed]
            for r in report.resolutions
        ),
    )
    context.record(notes=report.notes, backward_ratios=report.backward_ratios)
    context.check("mean_error_decreasing", report.error_decreasing, comparison="strictly decreasing")
    context.check("backward_fraction_decreasing", report.backward_decreasing, comparison="non-increasing")
    lo, hi = HALVING_BAND
    for i, ratio in enumerate(report.backward_ratios):
        context.check(
            f"backward_halving[{i}]",
            None if ratio is None else lo <= ratio <= hi,
            value=ratio,
            comparison=f"in [{lo}, {hi}]",
        )
    context.check("convergence", report.passed, message="; ".join(report.notes) or None)


@experiment("nonlocality", help="Factorization defect of the two-quanta guidance current.")
def nonlocality(config: RunConfig, context: RunContext) -> None:
    settings = config.nonlocality
    report = nonlocality_from_specs(
        settings.chi, settings.phi, settings.mass, settings.points, settings.length, settings.origin
    )
    quarter = 0.25 * settings.length
    half = settings.origin + 0.5 * settings.length
    disjoint = nonlocality_from_specs(
        settings.chi.model_copy(update={"center": settings.origin + quarter}),
        settings.phi.model_copy(update={"center": settings.origin + 3.0 * quarter}),
        settings.mass,
        settings.points,
        settings.length,
        settings.origin,
        chi_window=(settings.origin, half),
        phi_window=(half, settings.origin + settings.length),
    )

    x = report.x_grid
    context.write_table(
        "grid",
        [
            Column("x1", "Position of quantum 1", "length"),
            Column("x2", "Position of quantum 2", "length"),
            Column("density", "ρ(x1, x2)", "1/length²"),
            Column("current", "J₁(x1, x2), the current of quantum 1", "1/length²"),
        ],
        (
            [x[i], x[j], report.density[i, j], report.current[i, j]]
            for i in range(x.size)
            for j in range(x.size)
        ),
    )
    summary = report.summary()
    context.write_table(
        "summary",
        [
            Column("sigma_ratio", "σ₂/σ₁ of the current on the χ×Φ support block"),
            Column("velocity_spread", "Spread of J₁/ρ over x2 at x1*", "velocity"),
            Column("x1_star", "Maximum of the quantum-1 marginal", "length"),
            Column("four_term_deviation", "Largest gap between the direct and the expanded current"),
            Column("noise_floor", "Guidance integrator tolerance", "velocity"),
            Column("disjoint_sigma_ratio", "σ₂/σ₁ for windowed disjoint orbitals"),
        ],
        [[*summary.values(), disjoint.sigma_ratio]],
    )

    context.check(
        "sigma_ratio", report.sigma_ratio > settings.ratio_threshold,
        value=report.sigma_ratio, threshold=settings.ratio_threshold, comparison=">",
    )
    spread_floor = settings.spread_factor * report.noise_floor
    context.check(
        "velocity_spread", report.velocity_spread > spread_floor,
        value=report.velocity_spread, threshold=spread_floor, comparison=">",
    )
    context.check(
        "four_term_expansion", report.four_term_deviation <= FOUR_TERM_TOLERANCE,
        value=report.four_term_deviation, threshold=FOUR_TERM_TOLERANCE,
    )
    context.check(
        "disjoint_factorizes", disjoint.sigma_ratio <= settings.disjoint_threshold,
        value=disjoint.sigma_ratio, threshold=settings.disjoint_threshold,
    )


@experiment("commutator-check", help="Smeared density against the particle number on a small mode grid.")
def commutator_check(config: RunConfig, context: RunContext) -> None:
    settings = config.commutator
    dp = 2.0 * math.pi / settings.length
    x_grid = settings.length * np.arange(settings.points) / settings.points
    modes = ModeSet.from_momenta(
        [n * dp for n in settings.electrons],
        [n * dp for n in settings.positrons],
        mass=settings.mass,
        momentum_spacing=dp,
    )

    operators = build_mode_operators(modes)
    worst = 0.0
    identity = np.eye(modes.dimension)
    for i, mi in enumerate(modes.modes):
        a_i = operators[mi][0]
        for j, mj in enumerate(modes.modes):
            a_j, a_j_dag = operators[mj]
            worst = max(worst, float(np.max(np.abs(anticommutator(a_i, a_j)))))
            target = identity if i == j else 0.0
            worst = max(worst, float(np.max(np.abs(anticommutator(a_i, a_j_dag) - target))))
    context.check(
        "canonical_anticommutators", worst <= ANTICOMMUTATOR_TOLERANCE,
        value=worst, threshold=ANTICOMMUTATOR_TOLERANCE,
    )

    d = periodic_displacement(x_grid, settings.smearing_center, settings.length)
    gaussian = np.exp(-(d ** 2) / (2.0 * settings.smearing_width ** 2))
    smeared = smeared_density_commutator(gaussian, x_grid, modes)
    constant = smeared_density_commutator(np.ones_like(x_grid), x_grid, modes)

    p, k = smeared.pair
    deviation = abs(smeared.pair_element - smeared.closed_form)
    context.record(gaussian=commutator_summary(smeared), constant=commutator_summary(constant))
    context.write_table(
        "pair",
        [
            Column("smearing", "gaussian or constant"),
            Column("p", "Electron momentum of the created pair", "1/length"),
            Column("k", "Positron momentum of the created pair", "1/length"),
            Column("element_real", "Re ⟨0|[D_f, N]|d†(k)c†(p)|0⟩"),
            Column("element_imag", "Im ⟨0|[D_f, N]|d†(k)c†(p)|0⟩"),
            Column("closed_form_real", "Re of the pair-creation closed form"),
            Column("closed_form_imag", "Im of the pair-creation closed form"),
            Column("max_abs_commutator", "Largest |entry| of [D_f, N]"),
        ],
        [
            [name, p, k, r.pair_element.real, r.pair_element.imag, r.closed_form.real, r.closed_form.imag, r.max_abs]
            for name, r in (("gaussian", smeared), ("constant", constant))
        ],
    )
    context.check(
        "commutator_nonzero", abs(smeared.pair_element) > PAIR_ELEMENT_MINIMUM,
        value=abs(smeared.pair_element), threshold=PAIR_ELEMENT_MINIMUM, comparison=">",
    )
    context.check(
        "closed_form_agreement", deviation <= CLOSED_FORM_TOLERANCE,
        value=deviation, threshold=CLOSED_FORM_TOLERANCE,
    )
    context.check(
        "constant_smearing_commutes", constant.max_abs <= CONSTANT_SMEARING_TOLERANCE,
        value=constant.max_abs, threshold=CONSTANT_SMEARING_TOLERANCE,
    )


@experiment("velocity-table", help="Plane-wave lattice velocities and the paired-current cancellation.")
def velocity_table_experiment(config: RunConfig, context: RunContext) -> None:
    settings = config.velocity
    params = config.lattice.model_copy(update={"quanta": 1, "coupling": 0.0})
    rows = velocity_table(params, settings.momenta, site=settings.site % params.sites)
    context.write_table(
        "velocities",
        [
            Column("p", "Plane-wave momentum", "1/length"),
            Column("velocity", "Re[Ψ*(k+1)Ψ(k)]/|Ψ(k)|²", "velocity"),
            Column("expected", "cos(pδ)", "velocity"),
            Column("deviation", "|velocity - expected|", "velocity"),
        ],
        ([r["p"], r["velocity"], r["expected"], r["deviation"]] for r in rows),
    )
    worst = max(r["deviation"] for r in rows)
    context.check("velocity_closed_form", worst <= settings.tolerance, value=worst, threshold=settings.tolerance)

    packet = config.packets[0]
    fine = params.model_copy(update={"sites": 2 * params.sites, "spacing": 0.5 * params.spacing})

    def cancellation(lattice: LatticeParams, position: float):
        state = build_initial_packet(enumerate_sector(lattice), PacketSpec(orbitals=[packet]))
        return current_cancellation_check(state, _even_site(position, lattice), lattice.spacing)

    at_center = cancellation(params, packet.center)
    offset = packet.center + packet.width
    coarse, refined = cancellation(params, offset), cancellation(fine, offset)
    context.write_table(
        "cancellation",
        [
            Column("two_n", "Number of staggered sites"),
            Column("delta", "Lattice spacing", "length"),
            Column("site", "Even site sampled"),
            Column("forward", "Current J_(k+1)k", "1/time"),
            Column("backward", "Current J_(k-1)k", "1/time"),
            Column("ratio", "|J₊ + J₋|/(|J₊| + |J₋|)"),
        ],
        [
            [lattice.sites, lattice.spacing, r.site, r.forward, r.backward, r.ratio]
            for lattice, r in ((params, at_center), (params, coarse), (fine, refined))
        ],
    )
    context.check(
        "cancellation_at_center", at_center.ratio < settings.cancellation_threshold,
        value=at_center.ratio, threshold=settings.cancellation_threshold, comparison="<",
    )
    lo, hi = HALVING_BAND
    halving = refined.ratio / coarse.ratio if coarse.ratio > 0 else math.nan
    context.check(
        "cancellation_halving", bool(lo <= halving <= hi) if coarse.ratio > 0 else None,
        value=halving, comparison=f"in [{lo}, {hi}]",
    )
