import math

import numpy as np
import pytest

from beable_sdk.exceptions import NodeReached, ValidationError
from beable_sdk.guidance import SpinorField, integrate_guidance, periodic_distance, time_reversed

POINTS = 16


def frames_for(spinor, times=(0.0, 1.0)):
    x_grid = np.arange(POINTS, dtype=float)
    values = np.tile(np.asarray(spinor, dtype=complex), (POINTS, 1)) / math.sqrt(POINTS)
    return [SpinorField(x_grid, values, t) for t in times]


RIGHT_MOVER = np.array([1.0, 1.0]) / math.sqrt(2.0)


def test_chiral_spinor_moves_at_light_speed():
    result = integrate_guidance(np.array([3.0]), frames_for(RIGHT_MOVER), dt=0.1)
    assert result.times[-1] == pytest.approx(1.0)
    assert result.final[0, 0] == pytest.approx(4.0)
    assert not result.terminated.any()


def test_time_reversal_flips_the_velocity():
    reversed_frames = time_reversed(frames_for(RIGHT_MOVER))
    assert [f.time for f in reversed_frames] == [0.0, 1.0]
    result = integrate_guidance(np.array([3.0]), reversed_frames, dt=0.1)
    assert result.final[0, 0] == pytest.approx(2.0)


def test_positions_wrap_around_the_box():
    result = integrate_guidance(np.array([[15.5], [7.0]]), frames_for(RIGHT_MOVER), dt=0.05)
    assert result.positions.shape == (21, 2, 1)
    assert result.final[0, 0] == pytest.approx(0.5)
    assert result.final[1, 0] == pytest.approx(8.0)


def test_periodic_distance():
    assert periodic_distance(0.5, 15.5, 16.0) == pytest.approx(1.0)
    assert np.allclose(periodic_distance(np.array([1.0, 9.0]), np.array([3.0, 1.0]), 16.0), [2.0, 8.0])


def test_zero_density_is_a_node():
    with pytest.raises(NodeReached):
        integrate_guidance(np.array([3.0]), frames_for([0.0, 0.0]), dt=0.1)


def test_frames_must_increase_in_time():
    with pytest.raises(ValidationError):
        integrate_guidance(np.array([3.0]), frames_for(RIGHT_MOVER, times=(1.0, 0.0)), dt=0.1)


def test_position_arity():
    with pytest.raises(ValidationError):
        integrate_guidance(np.array([1.0, 2.0]), frames_for(RIGHT_MOVER), dt=0.1)
