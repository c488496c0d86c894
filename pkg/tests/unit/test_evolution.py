import numpy as np
import pytest

from beable_sdk.evolution import (
    Propagator,
    StateVector,
    build_initial_packet,
    conservation_drifts,
    contact_interaction_term,
    energy,
    evolve,
    slater_amplitudes,
    state_from_configuration,
    superposed_packet,
)
from beable_sdk.evolution.packets import lattice_orbital, periodic_displacement
from beable_sdk.exceptions import DegenerateOrbitals, StepTooLarge, ValidationError
from beable_sdk.guidance.current import guidance_field
from beable_sdk.guidance.spinor_field import staggered_to_spinor
from beable_sdk.lattice import enumerate_sector
from beable_sdk.models.types import EvolutionConfig, IntegratorMethod, LatticeParams, OrbitalSpec, PacketSpec

RK4 = EvolutionConfig(method=IntegratorMethod.RK4, dt=1e-3)


def test_initial_packet_is_normalized(two_quanta_sector):
    basis, _, state = two_quanta_sector
    assert state.norm == pytest.approx(1.0, abs=1e-12)
    assert state.dimension == basis.dimension == 28


def test_packet_must_match_quanta(two_quanta_params):
    basis = enumerate_sector(two_quanta_params)
    with pytest.raises(ValidationError):
        build_initial_packet(basis, PacketSpec.single(center=4.0, width=2.0))


def test_identical_orbitals_are_degenerate(two_quanta_params):
    basis = enumerate_sector(two_quanta_params)
    orbital = OrbitalSpec(center=4.0, width=2.0, momentum=0.5)
    with pytest.raises(DegenerateOrbitals):
        build_initial_packet(basis, PacketSpec(orbitals=[orbital, orbital]))


def test_slater_determinant_of_site_orbitals(two_quanta_params):
    basis = enumerate_sector(two_quanta_params)
    orbitals = np.zeros((2, 8), dtype=complex)
    orbitals[0, 5] = 1.0
    orbitals[1, 2] = 1.0
    amplitudes = slater_amplitudes(basis, orbitals)
    # det[[φ₀(2), φ₀(5)], [φ₁(2), φ₁(5)]] = -1
    assert amplitudes[basis.rank((2, 5))] == pytest.approx(-1.0)
    assert np.count_nonzero(amplitudes) == 1


def test_lattice_orbital_uses_spinor_components(one_quantum_params):
    spec = OrbitalSpec(center=4.0, width=2.0, momentum=0.0)
    row = lattice_orbital(spec, one_quantum_params)
    # at rest the positive-energy spinor is (1, 0): odd sites are empty
    assert np.allclose(row[1::2], 0.0)
    assert np.argmax(np.abs(row)) == 4


def test_colliding_orbitals_reverse_the_velocity():
    params = LatticeParams(sites=128, spacing=0.5, mass=0.0, quanta=1)
    basis = enumerate_sector(params)
    state = superposed_packet(
        basis,
        [
            OrbitalSpec(center=26.0, width=4.0, momentum=0.5),
            OrbitalSpec(center=38.0, width=4.0, momentum=-0.5),
        ],
    )
    assert state.norm == pytest.approx(1.0, abs=1e-12)
    field_ = guidance_field(staggered_to_spinor(state.amplitudes, params.spacing))
    velocity = field_.currents[0] / field_.density
    # cell j sits at x = 2jδ = j
    assert velocity[20] > 0.5
    assert velocity[44] < -0.5


def test_superposed_packet_holds_one_quantum(two_quanta_params, one_quantum_params):
    orbital = OrbitalSpec(center=4.0, width=2.0, momentum=0.5)
    with pytest.raises(ValidationError):
        superposed_packet(enumerate_sector(two_quanta_params), [orbital])
    with pytest.raises(ValidationError):
        superposed_packet(enumerate_sector(one_quantum_params), [])
    single = superposed_packet(enumerate_sector(one_quantum_params), [orbital])
    built = build_initial_packet(enumerate_sector(one_quantum_params), PacketSpec(orbitals=[orbital]))
    assert np.allclose(single.amplitudes, built.amplitudes)

def test_periodic_displacement():
    assert np.allclose(periodic_displacement(np.array([0.0, 7.0, 4.0]), 7.5, 8.0), [0.5, -0.5, -3.5])


@pytest.mark.parametrize("sector", ["one_quantum_sector", "two_quanta_sector"])
def test_norm_and_energy_conserved(sector, request):
    _, hamiltonian, state = request.getfixturevalue(sector)
    propagator = Propagator(hamiltonian)
    assert propagator.method is IntegratorMethod.EIGENDECOMPOSITION
    timeline = propagator.timeline(state, np.linspace(0.0, 10.0, 51))
    drifts = conservation_drifts(timeline, hamiltonian)
    assert drifts["max_norm_drift"] <= 1e-10
    assert drifts["max_energy_drift"] <= 1e-8


def test_rk4_agrees_with_eigendecomposition(two_quanta_sector):
    _, hamiltonian, state = two_quanta_sector
    times = [0.5, 1.0]
    exact = Propagator(hamiltonian).timeline(state, times)
    stepped = Propagator(hamiltonian, RK4).timeline(state, times)
    assert np.max(np.abs(exact.frames - stepped.frames)) <= 1e-8
    drifts = conservation_drifts(stepped, hamiltonian)
    assert drifts["max_norm_drift"] <= 1e-10
    assert drifts["max_energy_drift"] <= 1e-8


def test_rk4_step_bound(one_quantum_sector):
    _, hamiltonian, _ = one_quantum_sector
    with pytest.raises(StepTooLarge):
        Propagator(hamiltonian, EvolutionConfig(method=IntegratorMethod.RK4, dt=1.0))


def test_evolve_composes(one_quantum_sector):
    _, hamiltonian, state = one_quantum_sector
    once = evolve(state, hamiltonian, 1.0)
    twice = evolve(evolve(state, hamiltonian, 0.4), hamiltonian, 0.6)
    assert once.time == pytest.approx(1.0)
    assert np.allclose(once.amplitudes, twice.amplitudes, atol=1e-12)
    assert energy(once, hamiltonian) == pytest.approx(energy(state, hamiltonian), abs=1e-10)


def test_evolve_rejects_unnormalized_state(one_quantum_sector):
    _, hamiltonian, state = one_quantum_sector
    with pytest.raises(ValidationError):
        evolve(StateVector(2.0 * state.amplitudes), hamiltonian, 1.0)


def test_evolve_rejects_negative_time(one_quantum_sector):
    _, hamiltonian, state = one_quantum_sector
    with pytest.raises(ValidationError):
        evolve(state, hamiltonian, -0.1)


def test_timeline_interpolates_between_frames(one_quantum_sector):
    _, hamiltonian, state = one_quantum_sector
    timeline = Propagator(hamiltonian).timeline(state, [0.0, 1.0])
    assert np.allclose(timeline.state(0).amplitudes, state.amplitudes)
    assert np.allclose(timeline.state_at(0.5).amplitudes, evolve(state, hamiltonian, 0.5).amplitudes, atol=1e-12)


def test_timeline_times_must_increase(one_quantum_sector):
    _, hamiltonian, state = one_quantum_sector
    with pytest.raises(ValidationError):
        Propagator(hamiltonian).timeline(state, [1.0, 0.5])


def test_configuration_state(one_quantum_params):
    basis = enumerate_sector(one_quantum_params)
    state = state_from_configuration(basis, (3,))
    assert state.probabilities()[basis.rank((3,))] == 1.0


def test_contact_term_per_cell():
    params = LatticeParams(sites=8, spacing=0.5, quanta=2, coupling=1.5)
    basis = enumerate_sector(params)
    term = contact_interaction_term(params, basis)
    scale = params.coupling / params.spacing
    assert term[basis.rank((0, 1))] == 0.0
    assert term[basis.rank((0, 2))] == pytest.approx(2 * scale)
    assert term[basis.rank((1, 2))] == pytest.approx(2 * scale)


def test_contact_term_vanishes_without_coupling(two_quanta_params):
    assert not np.any(contact_interaction_term(two_quanta_params))
