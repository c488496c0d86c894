import math

import numpy as np
import pytest

from beable_sdk.dynamics import equivariance_statistics, noise_bound, simulate_ensemble
from beable_sdk.dynamics.equivariance import checkpoint_statistics
from beable_sdk.exceptions import ValidationError


def test_noise_bound():
    assert noise_bound(8, 3000) == pytest.approx(3.0 * math.sqrt(8 / 6000))


def test_exact_counts_have_no_distance():
    expected = np.array([0.1, 0.2, 0.3, 0.4])
    stats = checkpoint_statistics(expected * 1000, expected, time=0.5)
    assert stats.tv_distance == pytest.approx(0.0, abs=1e-12)
    assert stats.max_abs_z == pytest.approx(0.0, abs=1e-9)
    assert stats.trajectories == 1000


def test_mass_where_the_state_vanishes_is_flagged():
    stats = checkpoint_statistics(np.array([9.0, 1.0]), np.array([1.0, 0.0]), time=0.0)
    assert math.isinf(stats.max_abs_z)
    assert stats.z_exceed_fraction > 0
    assert stats.tv_distance == pytest.approx(0.1)


def test_sparse_configurations_are_not_scored():
    expected = np.array([0.5 - 1e-5, 0.5 - 1e-5, 2e-5])
    # one stray count where n·P = 0.02 gives |z| near 7
    sparse = checkpoint_statistics(np.array([500.0, 499.0, 1.0]), expected, time=0.5)
    assert sparse.max_abs_z > 3.5
    assert sparse.z_exceed_fraction == 0.0
    skewed = checkpoint_statistics(np.array([600.0, 400.0, 0.0]), expected, time=0.5)
    assert skewed.z_exceed_fraction == pytest.approx(2 / 3)


def test_checkpoint_must_be_sampled(one_quantum_sector):
    _, hamiltonian, state = one_quantum_sector
    ensemble = simulate_ensemble(hamiltonian, state, 0.2, 1e-3, count=5, seed=1, record_every=100)
    with pytest.raises(ValidationError):
        equivariance_statistics(ensemble, [0.15])


@pytest.mark.slow
@pytest.mark.parametrize("sector", ["one_quantum_sector", "two_quanta_sector"])
def test_ensemble_stays_distributed_as_the_pilot_state(sector, request):
    _, hamiltonian, state = request.getfixturevalue(sector)
    ensemble = simulate_ensemble(
        hamiltonian, state, horizon=1.0, dt=2e-4, count=3000, seed=20240,
        record_every=500, threads=2,
    )
    report = equivariance_statistics(ensemble, [0.0, 0.5, 1.0])
    assert report.dimension == state.dimension
    assert [c.time for c in report.checkpoints] == [0.0, 0.5, 1.0]
    for checkpoint in report.checkpoints:
        assert checkpoint.trajectories == 3000
        assert checkpoint.tv_distance <= checkpoint.noise_bound
        assert checkpoint.z_exceed_fraction < 0.01
    assert report.within_noise
