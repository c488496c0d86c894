import math

import numpy as np
import pytest

from beable_sdk.evolution import Propagator, build_initial_packet
from beable_sdk.exceptions import ValidationError
from beable_sdk.guidance import (
    continuity_residual,
    guidance_field,
    integrate_guidance,
    merged_lattice_current,
    staggered_to_spinor,
    time_reversed,
)
from beable_sdk.guidance.spinor_field import smoothness
from beable_sdk.lattice import assemble_hamiltonian, enumerate_sector
from beable_sdk.models.types import LatticeParams, OrbitalSpec, PacketSpec

BOX = 32.0
# phase e^{ipx} is periodic on the box
PACKET = OrbitalSpec(center=16.0, width=4.0, momentum=3.0 * math.pi / 16.0)
HORIZON = 4.0
FRAME_STEP = 0.01


def initial_state(sites, mass=0.5):
    params = LatticeParams(sites=sites, spacing=BOX / sites, mass=mass, quanta=1)
    basis = enumerate_sector(params)
    return params, basis, build_initial_packet(basis, PacketSpec(orbitals=[PACKET]))


def evolving_frames(sites):
    params, basis, state = initial_state(sites)
    times = FRAME_STEP * np.arange(int(round(HORIZON / FRAME_STEP)) + 1)
    timeline = Propagator(assemble_hamiltonian(params, basis)).timeline(state, times)
    return [staggered_to_spinor(timeline.frames[k], params.spacing, float(t)) for k, t in enumerate(times)]


@pytest.fixture(scope="module")
def frames_128():
    return evolving_frames(128)


@pytest.fixture(scope="module")
def frames_256():
    return evolving_frames(256)


def worst_continuity(frames):
    scale = max(float(np.max(f.density())) for f in frames)
    worst = max(float(np.max(np.abs(continuity_residual(a, b)))) for a, b in zip(frames, frames[1:]))
    return worst / scale


def test_continuity_holds_on_an_evolving_packet(frames_128):
    assert worst_continuity(frames_128) < 2e-2
    residual = continuity_residual(frames_128[100], frames_128[101])
    step = float(frames_128[0].x_grid[1] - frames_128[0].x_grid[0])
    assert abs(float(np.sum(residual)) * step) < 1e-8


def test_continuity_residual_shrinks_with_the_spacing(frames_128, frames_256):
    assert worst_continuity(frames_256) < 0.75 * worst_continuity(frames_128)


def test_continuity_needs_ordered_frames(frames_128):
    with pytest.raises(ValidationError):
        continuity_residual(frames_128[1], frames_128[0])


def merged_current_error(sites):
    params, _, state = initial_state(sites)
    continuum = guidance_field(staggered_to_spinor(state.amplitudes, params.spacing)).currents[0]
    merged = merged_lattice_current(state, params.spacing)
    return float(np.max(np.abs(merged - continuum))) / float(np.max(np.abs(continuum)))


def test_merged_current_approaches_the_continuum_current():
    coarse, fine = merged_current_error(128), merged_current_error(256)
    assert coarse < 0.25
    assert fine < 0.7 * coarse


def test_fan_of_trajectories_never_crosses(frames_128):
    starts = np.linspace(PACKET.center - 2.0 * PACKET.width, PACKET.center + 2.0 * PACKET.width, 20)
    result = integrate_guidance(starts[:, None], frames_128, dt=FRAME_STEP)
    assert not result.terminated.any()
    paths = result.positions[:, :, 0]
    assert np.all(np.diff(paths, axis=1) > 0)
    assert float(np.mean(paths[-1] - paths[0])) > 1.0


def test_time_reversal_retraces_an_evolving_trajectory(frames_128):
    starts = np.array([[12.0], [16.0], [21.0]])
    forward = integrate_guidance(starts, frames_128, dt=FRAME_STEP)
    backward = integrate_guidance(forward.final, time_reversed(frames_128), dt=FRAME_STEP)
    assert np.allclose(backward.final, starts, atol=1e-3)
    assert float(np.max(np.abs(forward.final - starts))) > 1.0


def test_resolved_packet_is_smooth():
    # σ = 20δ at both spacings
    for sites in (256, 512):
        spacing = 64.0 / sites
        params = LatticeParams(sites=sites, spacing=spacing, mass=0.5, quanta=1)
        basis = enumerate_sector(params)
        packet = OrbitalSpec(center=32.0, width=20.0 * spacing, momentum=0.5)
        state = build_initial_packet(basis, PacketSpec(orbitals=[packet]))
        measured = smoothness(staggered_to_spinor(state.amplitudes, spacing))
        assert 0.0 < measured <= 2.0 * spacing * (packet.momentum + 1.0 / packet.width)
