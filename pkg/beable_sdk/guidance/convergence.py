"""
Continuum-limit study: the jump process against the guidance ODE at several resolutions.

The physical packet and box stay fixed while δ = L/2N shrinks. A site k is
read as the cell position 2δ·(k // 2). A jump is backward when its direction
opposes the sign of the guidance velocity J/ρ at the cell it leaves.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from ..dynamics.trajectories import simulate_ensemble, substep_grid
from ..evolution.packets import build_initial_packet, superposed_packet
from ..evolution.propagator import Propagator
from ..exceptions import ValidationError
from ..lattice.basis import enumerate_sector
from ..lattice.hamiltonian import assemble_hamiltonian
from ..models.types import ConvergenceReport, EvolutionConfig, LatticeParams, OrbitalSpec, PacketSpec, ResolutionResult
from .integrate import GuidanceTimeline, integrate_guidance, periodic_distance
from .spinor_field import staggered_to_spinor

logger = logging.getLogger(__name__)

HALVING_BAND = (0.3, 0.7)


def resolution_seed(master_seed: int, sites: int) -> int:
    """Independent per-resolution seed derived from the master seed."""
    return int(np.random.SeedSequence([master_seed, sites]).generate_state(1)[0])


def site_positions(sites: np.ndarray, spacing: float) -> np.ndarray:
    return 2.0 * spacing * (np.asarray(sites) // 2)



def run_resolution(
    packet: OrbitalSpec,
    sites: int,
    box_length: float,
    mass: float,
    trials: int,
    horizon: float,
    seed: int,
    dt_fraction: float = 0.05,
    evolution: Optional[EvolutionConfig] = None,
    threads: int = 1,
    partner: Optional[OrbitalSpec] = None,
) -> ResolutionResult:
    """Mean final-position error and backward-jump fraction at one lattice resolution.

    With a ``partner`` the quantum starts in the superposition of both orbitals.
    """
    spacing = box_length / sites
    params = LatticeParams(sites=sites, spacing=spacing, mass=mass, quanta=1)
    basis = enumerate_sector(params)
    hamiltonian = assemble_hamiltonian(params, basis)
    if partner is None:
        state = build_initial_packet(basis, PacketSpec(orbitals=[packet]))
    else:
        state = superposed_packet(basis, [packet, partner])
    grid = substep_grid(0.0, horizon, dt_fraction * spacing)
    timeline = Propagator(hamiltonian, evolution).timeline(state, grid)

    ensemble = simulate_ensemble(
        hamiltonian, state, horizon, dt_fraction * spacing, count=trials, seed=seed,
        timeline=timeline, threads=threads, record_every=max(1, grid.size - 1),
    )

    frames = [staggered_to_spinor(timeline.frames[k], spacing, float(t)) for k, t in enumerate(grid)]
    guidance = GuidanceTimeline.from_spinors(frames)
    starts = np.array([t.indices[0] for t in ensemble.trajectories])
    finals = np.array([t.final_index for t in ensemble.trajectories])
    guided = integrate_guidance(
        site_positions(starts, spacing)[:, None], frames, dt=float(grid[1] - grid[0]) if grid.size > 1 else horizon,
        timeline=guidance, stop_at_nodes=True,
    )
    errors = periodic_distance(site_positions(finals, spacing), guided.final[:, 0], box_length)

    total = 0
    backward = 0
    for trajectory in ensemble.trajectories:
        for jump in trajectory.jumps:
            field_ = guidance.fields[jump.step]
            cell = jump.moved_from // 2
            rho = field_.density[cell]
            velocity = field_.currents[0][cell] / rho if rho > 0 else 0.0
            total += 1
            if velocity * jump.direction < 0:
                backward += 1

    if np.any(guided.terminated):
        logger.warning(f"2N={sites}: {int(guided.terminated.sum())} guidance trajectories stopped at nodes")
    result = ResolutionResult(
        two_n=sites,
        delta=spacing,
        mean_error=float(np.mean(errors)),
        backward_fraction=backward / total if total else 0.0,
        total_jumps=total,
        trials=trials,
        seed=seed,
    )
    logger.info(
        f"2N={sites} δ={spacing:.4g}: mean error {result.mean_error:.4g}, "
        f"backward fraction {result.backward_fraction:.4g} over {total} jumps"
    )
    return result



def _all_defined(flags: Sequence[Optional[bool]]) -> Optional[bool]:
    if any(flag is False for flag in flags):
        return False
    if any(flag is None for flag in flags):
        return None
    return True


def evaluate_convergence(resolutions: List[ResolutionResult]) -> ConvergenceReport:
    """Apply the PASS rules to results ordered by decreasing δ.

    A halving ratio whose coarser fraction is zero is undefined, and so is the
    verdict unless another rule already failed.
    """
    ordered = sorted(resolutions, key=lambda r: -r.delta)
    report = ConvergenceReport(resolutions=ordered)
    if len(ordered) < 2:
        report.notes.append("a single resolution cannot show convergence; PASS/FAIL undefined")
        return report

    errors = [r.mean_error for r in ordered]
    fractions = [r.backward_fraction for r in ordered]
    report.error_decreasing = all(b < a for a, b in zip(errors, errors[1:]))
    if all(f == 0 for f in fractions):
        report.notes.append("no backward jumps at any resolution; backward scaling undefined")
    else:
        report.backward_decreasing = all(b <= a for a, b in zip(fractions, fractions[1:]))

    band_ok: Optional[bool] = True
    for coarse, fine in zip(fractions, fractions[1:]):
        if coarse > 0:
            ratio = fine / coarse
            report.backward_ratios.append(ratio)
            if not HALVING_BAND[0] <= ratio <= HALVING_BAND[1]:
                band_ok = False
        else:
            report.backward_ratios.append(None)
            report.notes.append("no backward jumps at the coarser resolution; halving ratio undefined")
            if band_ok is not False:
                band_ok = None
    report.passed = _all_defined([report.error_decreasing, report.backward_decreasing, band_ok])
    return report


def convergence_study(
    packet: OrbitalSpec,
    resolutions: Sequence[int],
    trials: int,
    horizon: float,
    seed: int,
    box_length: float,
    mass: float = 0.0,
    dt_fraction: float = 0.05,
    evolution: Optional[EvolutionConfig] = None,
    threads: int = 1,
    partner: Optional[OrbitalSpec] = None,
) -> ConvergenceReport:
    """Run every resolution (concurrently when ``threads`` > 1) and apply the PASS rules."""
    if not resolutions:
        raise ValidationError("convergence study needs at least one resolution")
    if len(set(resolutions)) != len(resolutions):
        raise ValidationError(f"duplicate resolutions in {list(resolutions)}")

    def work(sites: int) -> ResolutionResult:
        return run_resolution(
            packet, sites, box_length, mass, trials, horizon,
            resolution_seed(seed, sites), dt_fraction, evolution, partner=partner,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=min(threads, len(resolutions))) as pool:
            results = list(pool.map(work, resolutions))
    else:
        results = [work(sites) for sites in resolutions]
    return evaluate_convergence(results)
