"""
Stochastic beable trajectories under Bell's jump law.

Time is split into fixed substeps of length dt. On each substep the rates are
taken from the pilot-state at the start of the substep and one uniform draw
decides between staying (probability 1 - R·dt) and jumping to target m
(probability T_m·dt, targets in table order). At most one jump per substep.

Every trajectory owns a generator spawned from the master seed, so a
trajectory is reproduced bit-for-bit whether it runs alone, inside an
ensemble, or on any number of threads.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ..exceptions import RateStepOverflow, SourceProbabilityUnderflow, ValidationError
from ..evolution.propagator import PilotTimeline, Propagator, StateVector
from ..lattice.basis import Configuration, SectorBasis
from ..lattice.hamiltonian import SectorHamiltonian
from ..models.types import EvolutionConfig
from .currents import PROBABILITY_FLOOR, GeneratorTable, build_generator_table

logger = logging.getLogger(__name__)

RATE_STEP_CAP = 0.1
DRAW_BLOCK = 1024


@dataclass(frozen=True)
class JumpEvent:
    """One executed jump; ``step`` indexes the substep (and timeline frame) it started on."""

    time: float
    step: int
    source: int
    target: int
    moved_from: int
    moved_to: int
    direction: int


@dataclass
class Trajectory:
    """Beable history: sampled configurations plus the full jump log."""

    times: np.ndarray
    indices: np.ndarray  # configuration rank at each sample time
    jumps: List[JumpEvent]
    seed: int
    stream: int = 0

    def configurations(self, basis: SectorBasis) -> List[Configuration]:
        return [basis.unrank(int(i)) for i in self.indices]

    @property
    def jumped(self) -> np.ndarray:
        """1 at each sample where the configuration changed since the previous sample."""
        flags = np.zeros(self.indices.size, dtype=np.int8)
        flags[1:] = self.indices[1:] != self.indices[:-1]
        return flags

    @property
    def final_index(self) -> int:
        return int(self.indices[-1])


@dataclass
class EnsembleResult:
    times: np.ndarray
    trajectories: List[Trajectory] = field(repr=False)
    timeline: PilotTimeline = field(repr=False)
    dt: float = 0.0
    seed: int = 0

    def __len__(self) -> int:
        return len(self.trajectories)

    def indices_at(self, sample: int) -> np.ndarray:
        return np.array([t.indices[sample] for t in self.trajectories], dtype=np.int64)

    @property
    def total_jumps(self) -> int:
        return sum(len(t.jumps) for t in self.trajectories)


def trajectory_seed(master_seed: int, stream: int) -> np.random.SeedSequence:
    """Child seed of trajectory ``stream``; equal to SeedSequence(master).spawn(n)[stream]."""
    return np.random.SeedSequence(master_seed, spawn_key=(stream,))


def substep_grid(t0: float, horizon: float, dt: float) -> np.ndarray:
    """Uniform substep times from t0 to t0 + horizon with spacing at most dt."""
    if dt <= 0:
        raise ValidationError(f"dt must be positive, got {dt}")
    if horizon < 0:
        raise ValidationError(f"horizon must be non-negative, got {horizon}")
    steps = max(1, math.ceil(horizon / dt - 1e-9)) if horizon > 0 else 0
    return t0 + np.linspace(0.0, horizon, steps + 1)


class _UniformStream:
    """Block-buffered uniforms of one trajectory generator."""

    def __init__(self, seed: np.random.SeedSequence):
        self._rng = np.random.default_rng(seed)
        self._buffer = np.empty(0)
        self._pos = 0

    def next(self) -> float:
        if self._pos >= self._buffer.size:
            self._buffer = self._rng.random(DRAW_BLOCK)
            self._pos = 0
        value = self._buffer[self._pos]
        self._pos += 1
        return float(value)


def _run_chunk(
    streams: Sequence[int],
    initial: Optional[np.ndarray],
    timeline: PilotTimeline,
    table: GeneratorTable,
    master_seed: int,
    record_every: int,
    floor: float,
    rate_cap: float,
) -> List[Trajectory]:
    times = timeline.times
    steps = times.size - 1
    n = len(streams)
    uniforms = [_UniformStream(trajectory_seed(master_seed, s)) for s in streams]

    if initial is None:
        cdf = np.cumsum(timeline.probabilities()[0])
        cdf /= cdf[-1]
        current = np.array([int(np.searchsorted(cdf, u.next(), side="right")) for u in uniforms], dtype=np.int64)
        current = np.minimum(current, cdf.size - 1)
    else:
        current = np.asarray(initial, dtype=np.int64).copy()

    samples = list(range(0, steps + 1, record_every))
    if samples[-1] != steps:
        samples.append(steps)
    sample_pos = {s: i for i, s in enumerate(samples)}
    recorded = np.empty((n, len(samples)), dtype=np.int64)
    recorded[:, 0] = current
    logs: List[List[JumpEvent]] = [[] for _ in range(n)]
    rows = np.arange(n)

    for k in range(steps):
        dt = float(times[k + 1] - times[k])
        psi = timeline.frames[k]
        p_source = np.abs(psi[current]) ** 2
        if np.any(p_source <= floor):
            bad = int(np.argmax(p_source <= floor))
            raise SourceProbabilityUnderflow(
                f"|Ψ|² = {p_source[bad]:.3e} at configuration {int(current[bad])} (t={times[k]:.6g})",
                details={"stream": int(streams[bad]), "index": int(current[bad]), "time": float(times[k])},
            )
        targets = table.targets[current]
        valid = targets >= 0
        psi_m = np.where(valid, psi[np.where(valid, targets, 0)], 0.0)
        currents = 2.0 * np.real(np.conj(psi_m) * table.coefficients[current] * psi[current][:, None])
        rates = np.maximum(currents, 0.0) / p_source[:, None]
        cumulative = np.cumsum(rates * dt, axis=1)
        total = cumulative[:, -1] if cumulative.shape[1] else np.zeros(n)
        if np.any(total > rate_cap):
            bad = int(np.argmax(total > rate_cap))
            raise RateStepOverflow(
                f"R·dt = {total[bad]:.4f} exceeds {rate_cap} at t={times[k]:.6g}; shrink dt",
                details={"rate_step": float(total[bad]), "dt": dt, "time": float(times[k])},
            )
        draws = np.array([u.next() for u in uniforms])
        jumping = draws < total
        if np.any(jumping):
            slots = np.argmax(draws[:, None] < cumulative, axis=1)
            for i in rows[jumping]:
                source = int(current[i])
                slot = int(slots[i])
                target = int(table.targets[source, slot])
                logs[i].append(
                    JumpEvent(
                        time=float(times[k]),
                        step=k,
                        source=source,
                        target=target,
                        moved_from=int(table.moved_from[source, slot]),
                        moved_to=int(table.moved_to[source, slot]),
                        direction=int(table.directions[source, slot]),
                    )
                )
                current[i] = target
        if (k + 1) in sample_pos:
            recorded[:, sample_pos[k + 1]] = current

    sample_times = times[samples]
    return [
        Trajectory(times=sample_times, indices=recorded[i], jumps=logs[i], seed=master_seed, stream=int(s))
        for i, s in enumerate(streams)
    ]


def simulate_ensemble(
    hamiltonian: SectorHamiltonian,
    initial_state: StateVector,
    horizon: float,
    dt: float,
    count: int,
    seed: int,
    initial: Optional[Sequence[int]] = None,
    timeline: Optional[PilotTimeline] = None,
    evolution: Optional[EvolutionConfig] = None,
    threads: int = 1,
    record_every: int = 1,
    floor: float = PROBABILITY_FLOOR,
    rate_cap: float = RATE_STEP_CAP,
    first_stream: int = 0,
) -> EnsembleResult:
    """Simulate ``count`` independent trajectories.

    ``initial`` gives the starting configuration rank per trajectory; when
    omitted each trajectory draws its start from |Ψ₀|² with its own generator.
    ``timeline`` may be passed to reuse frames on the substep grid.
    """
    if count < 1:
        raise ValidationError("an ensemble needs at least one trajectory")
    if record_every < 1:
        raise ValidationError("record_every must be at least 1")
    if timeline is None:
        grid = substep_grid(initial_state.time, horizon, dt)
        timeline = Propagator(hamiltonian, evolution).timeline(initial_state, grid)
    table = build_generator_table(hamiltonian)
    if initial is not None and len(initial) != count:
        raise ValidationError(f"{len(initial)} initial configurations given for {count} trajectories")
    init = None if initial is None else np.asarray(initial, dtype=np.int64)

    streams = np.arange(first_stream, first_stream + count)
    threads = max(1, min(threads, count))
    chunks = np.array_split(np.arange(count), threads)
    logger.info(
        f"Simulating {count} trajectories over {timeline.times.size - 1} substeps "
        f"(dimension {hamiltonian.dimension}, {threads} thread(s))"
    )

    def work(chunk: np.ndarray) -> List[Trajectory]:
        return _run_chunk(
            streams[chunk],
            None if init is None else init[chunk],
            timeline,
            table,
            seed,
            record_every,
            floor,
            rate_cap,
        )

    if threads == 1:
        trajectories = work(chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trajectories = [t for part in pool.map(work, chunks) for t in part]

    effective_dt = float(timeline.times[1] - timeline.times[0]) if timeline.times.size > 1 else dt
    return EnsembleResult(
        times=trajectories[0].times,
        trajectories=trajectories,
        timeline=timeline,
        dt=effective_dt,
        seed=seed,
    )


def simulate_trajectory(
    initial: Optional[Sequence[int]],
    hamiltonian: SectorHamiltonian,
    initial_state: StateVector,
    horizon: float,
    dt: float,
    seed: int,
    stream: int = 0,
    evolution: Optional[EvolutionConfig] = None,
    record_every: int = 1,
) -> Trajectory:
    """One trajectory from configuration ``initial`` (or drawn from |Ψ₀|² when None)."""
    start = None if initial is None else [hamiltonian.basis.rank(initial)]
    result = simulate_ensemble(
        hamiltonian,
        initial_state,
        horizon,
        dt,
        count=1,
        seed=seed,
        initial=start,
        evolution=evolution,
        record_every=record_every,
        first_stream=stream,
    )
    return result.trajectories[0]


def sample_configurations(probabilities: np.ndarray, count: int, seed: int) -> np.ndarray:
    """``count`` configuration ranks drawn from ``probabilities`` with one stream per draw."""
    cdf = np.cumsum(probabilities)
    cdf /= cdf[-1]
    draws = np.array([np.random.default_rng(trajectory_seed(seed, i)).random() for i in range(count)])
    return np.minimum(np.searchsorted(cdf, draws, side="right"), cdf.size - 1)
