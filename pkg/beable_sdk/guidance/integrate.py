"""
Deterministic guidance dX/dt = J(X, t)/ρ(X, t) in configuration space.

J and ρ are interpolated multilinearly in space and linearly in time between
stored frames; positions wrap around the periodic box.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..exceptions import NodeReached, ValidationError
from .current import GuidanceField, guidance_field
from .spinor_field import SpinorField

logger = logging.getLogger(__name__)

DENSITY_FLOOR = 1e-10

_SIGMA_Z = np.array([1.0, -1.0])


@dataclass
class GuidanceTimeline:
    """Guidance fields of consecutive spinor frames."""

    times: np.ndarray
    fields: List[GuidanceField] = field(repr=False)

    @classmethod
    def from_spinors(cls, frames: Sequence[SpinorField]) -> "GuidanceTimeline":
        if not frames:
            raise ValidationError("guidance needs at least one spinor frame")
        times = np.array([f.time for f in frames], dtype=float)
        if np.any(np.diff(times) <= 0):
            raise ValidationError("spinor frames must be strictly increasing in time")
        return cls(times=times, fields=[guidance_field(f) for f in frames])

    @property
    def origin(self) -> float:
        return float(self.fields[0].x_grid[0])

    @property
    def length(self) -> float:
        return self.fields[0].length

    @property
    def quanta(self) -> int:
        return self.fields[0].quanta

    def wrap(self, positions: np.ndarray) -> np.ndarray:
        folded = np.mod(positions - self.origin, self.length)
        folded = np.where(folded >= self.length, 0.0, folded)
        return self.origin + folded

    def evaluate(self, t: float, positions: np.ndarray):
        """(ρ, J) at time t, linear in time between the bracketing frames."""
        if t < self.times[0] - 1e-12 or t > self.times[-1] + 1e-12:
            raise ValidationError(f"time {t} outside the frame range [{self.times[0]}, {self.times[-1]}]")
        positions = self.wrap(positions)
        if self.times.size == 1:
            return self.fields[0].at(positions)
        k = int(np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, self.times.size - 2))
        lam = (t - self.times[k]) / (self.times[k + 1] - self.times[k])
        rho0, j0 = self.fields[k].at(positions)
        rho1, j1 = self.fields[k + 1].at(positions)
        return (1.0 - lam) * rho0 + lam * rho1, (1.0 - lam) * j0 + lam * j1


@dataclass
class GuidanceTrajectory:
    """Guided positions of one or more configurations, shape (times, n, ω)."""

    times: np.ndarray
    positions: np.ndarray = field(repr=False)
    terminated: np.ndarray = field(repr=False)  # bool per trajectory
    node_times: np.ndarray = field(repr=False)  # NaN unless terminated
    diagnostics: Dict[str, float] = field(default_factory=dict)

    @property
    def final(self) -> np.ndarray:
        return self.positions[-1]


def integrate_guidance(
    initial: np.ndarray,
    frames: Sequence[SpinorField],
    dt: float,
    t_start: Optional[float] = None,
    t_end: Optional[float] = None,
    floor: float = DENSITY_FLOOR,
    stop_at_nodes: bool = False,
    timeline: Optional[GuidanceTimeline] = None,
) -> GuidanceTrajectory:
    """RK4 integration of the guidance law from ``initial`` positions.

    ``initial`` has shape (ω,) or (n, ω). A trajectory meeting ρ < floor raises
    ``NodeReached``; with ``stop_at_nodes`` it is frozen and flagged instead.
    """
    if dt <= 0:
        raise ValidationError(f"dt must be positive, got {dt}")
    timeline = timeline or GuidanceTimeline.from_spinors(frames)
    t0 = float(timeline.times[0]) if t_start is None else t_start
    t1 = float(timeline.times[-1]) if t_end is None else t_end
    x = np.atleast_2d(np.asarray(initial, dtype=float)).copy()
    if x.shape[1] != timeline.quanta:
        raise ValidationError(f"initial positions need {timeline.quanta} coordinates")
    x = timeline.wrap(x)

    rho, _ = timeline.evaluate(t0, x)
    if np.any(rho < floor):
        raise NodeReached(
            f"initial density {float(rho.min()):.3e} is below {floor}",
            details={"time": t0, "positions": x[np.argmin(rho)].tolist()},
        )

    steps = max(1, int(np.ceil((t1 - t0) / dt - 1e-9))) if t1 > t0 else 0
    h = (t1 - t0) / steps if steps else 0.0
    times = t0 + h * np.arange(steps + 1)
    history = np.empty((steps + 1,) + x.shape)
    history[0] = x
    alive = np.ones(x.shape[0], dtype=bool)
    node_times = np.full(x.shape[0], np.nan)
    min_density = float(rho.min())

    def velocity(t: float, positions: np.ndarray) -> np.ndarray:
        nonlocal min_density
        rho, current = timeline.evaluate(t, positions)
        low = rho < floor
        if np.any(low & alive):
            if not stop_at_nodes:
                i = int(np.argmax(low & alive))
                raise NodeReached(
                    f"density {float(rho[i]):.3e} below {floor} at t={t:.6g}",
                    details={"time": t, "positions": positions[i].tolist()},
                )
            newly = low & alive
            node_times[newly] = t
            alive[newly] = False
        if np.any(alive):
            min_density = min(min_density, float(rho[alive].min()))
        v = np.zeros_like(current)
        ok = ~low
        v[ok] = current[ok] / rho[ok][:, None]
        return v * alive[:, None]

    for k in range(steps):
        t = float(times[k])
        k1 = velocity(t, x)
        k2 = velocity(t + 0.5 * h, timeline.wrap(x + 0.5 * h * k1))
        k3 = velocity(t + 0.5 * h, timeline.wrap(x + 0.5 * h * k2))
        k4 = velocity(t + h, timeline.wrap(x + h * k3))
        x = timeline.wrap(x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
        history[k + 1] = x

    return GuidanceTrajectory(
        times=times,
        positions=history,
        terminated=~alive,
        node_times=node_times,
        diagnostics={"steps": float(steps), "step": h, "min_density": min_density},
    )


def time_reversed(frames: Sequence[SpinorField]) -> List[SpinorField]:
    """Frames Ψ(t) → σz Ψ*(t_first + t_last - t); flips J and keeps ρ."""
    if not frames:
        return []
    total = frames[0].time + frames[-1].time
    reversed_frames = []
    for frame in reversed(frames):
        values = np.conj(frame.values)
        for axis in range(1, values.ndim, 2):
            shape = [1] * values.ndim
            shape[axis] = 2
            values = values * _SIGMA_Z.reshape(shape)
        reversed_frames.append(frame.with_values(values, time=total - frame.time))
    return reversed_frames


def periodic_distance(a: np.ndarray, b: np.ndarray, length: float) -> np.ndarray:
    """Minimum-image distance on a circle of circumference ``length``."""
    d = np.mod(np.asarray(a) - np.asarray(b), length)
    return np.minimum(d, length - d)
