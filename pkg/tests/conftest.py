"""Shared fixtures for the beable test suite."""

import pytest

from beable_sdk.evolution import build_initial_packet
from beable_sdk.lattice import assemble_hamiltonian, enumerate_sector
from beable_sdk.models.types import LatticeParams, OrbitalSpec, PacketSpec


def make_sector(params: LatticeParams, orbitals=None):
    """(basis, hamiltonian, initial state) for ``params`` and Gaussian ``orbitals``."""
    basis = enumerate_sector(params)
    hamiltonian = assemble_hamiltonian(params, basis)
    orbitals = orbitals or [OrbitalSpec(center=params.box_length / 2, width=2.0 * params.spacing, momentum=0.5)]
    state = build_initial_packet(basis, PacketSpec(orbitals=orbitals))
    return basis, hamiltonian, state


@pytest.fixture
def one_quantum_params() -> LatticeParams:
    return LatticeParams(sites=8, spacing=1.0, mass=0.5, quanta=1)


@pytest.fixture
def two_quanta_params() -> LatticeParams:
    return LatticeParams(sites=8, spacing=1.0, mass=0.5, quanta=2)


@pytest.fixture
def two_quanta_orbitals():
    return [
        OrbitalSpec(center=2.0, width=2.0, momentum=0.5),
        OrbitalSpec(center=6.0, width=2.0, momentum=-0.5),
    ]


@pytest.fixture
def one_quantum_sector(one_quantum_params):
    return make_sector(one_quantum_params)


@pytest.fixture
def two_quanta_sector(two_quanta_params, two_quanta_orbitals):
    return make_sector(two_quanta_params, two_quanta_orbitals)
