"""
Empirical check that trajectory ensembles stay distributed as |Ψ(t)|².
"""

from __future__ import annotations

import logging
import math
from typing import Sequence

import numpy as np

from ..exceptions import ValidationError
from ..models.types import CheckpointStatistics, EquivarianceReport
from .trajectories import EnsembleResult

logger = logging.getLogger(__name__)

MIN_TRAJECTORIES = 1000
Z_THRESHOLD = 3.5
# normal approximation of a count needs n·P of at least this
MIN_EXPECTED_COUNT = 5.0


def noise_bound(dimension: int, trajectories: int) -> float:
    """3·sqrt(dim/(2n)): multinomial sampling bound on the total variation distance."""
    return 3.0 * math.sqrt(dimension / (2.0 * trajectories))


def checkpoint_statistics(
    counts: np.ndarray,
    expected: np.ndarray,
    time: float,
    z_threshold: float = Z_THRESHOLD,
) -> CheckpointStatistics:
    n = int(counts.sum())
    empirical = counts / n
    tv = 0.5 * float(np.sum(np.abs(empirical - expected)))
    variance = n * expected * (1.0 - expected)
    defined = variance > 0
    z = np.zeros_like(expected)
    z[defined] = (counts[defined] - n * expected[defined]) / np.sqrt(variance[defined])
    scored = defined & (n * expected >= MIN_EXPECTED_COUNT)
    # mass where |Ψ|² vanishes is an outright violation
    impossible = (~defined) & (np.abs(counts - n * expected) > 0)
    exceed = int(np.sum(np.abs(z[scored]) > z_threshold) + np.sum(impossible))
    max_z = float(np.max(np.abs(z))) if z.size else 0.0
    if np.any(impossible):
        max_z = math.inf
    return CheckpointStatistics(
        time=time,
        tv_distance=tv,
        noise_bound=noise_bound(expected.size, n),
        max_abs_z=max_z,
        z_exceed_fraction=exceed / expected.size,
        trajectories=n,
    )


def equivariance_statistics(
    ensemble: EnsembleResult,
    checkpoints: Sequence[float],
    z_threshold: float = Z_THRESHOLD,
) -> EquivarianceReport:
    """Compare the ensemble histogram with |Ψ(t)|² at each checkpoint time."""
    n = len(ensemble)
    if n < MIN_TRAJECTORIES:
        logger.warning(f"Only {n} trajectories; statistics below {MIN_TRAJECTORIES} are indicative only")
    dimension = ensemble.timeline.frames.shape[1]
    report = EquivarianceReport(dimension=dimension, z_threshold=z_threshold)
    for t in checkpoints:
        matches = np.flatnonzero(np.abs(ensemble.times - t) <= 1e-9)
        if matches.size == 0:
            raise ValidationError(f"checkpoint t={t} is not a recorded sample time of the ensemble")
        sample = int(matches[0])
        counts = np.bincount(ensemble.indices_at(sample), minlength=dimension).astype(float)
        expected = ensemble.timeline.state_at(float(ensemble.times[sample])).probabilities()
        expected = expected / expected.sum()
        stats = checkpoint_statistics(counts, expected, float(t), z_threshold)
        logger.debug(f"t={t}: TV {stats.tv_distance:.4f} (bound {stats.noise_bound:.4f})")
        report.checkpoints.append(stats)
    return report
