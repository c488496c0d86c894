import numpy as np
import pytest

from beable_sdk.lattice import assemble_hamiltonian, enumerate_sector
from beable_sdk.models.types import LatticeParams


@pytest.mark.parametrize("quanta", [1, 2, 3])
def test_hermitian(quanta):
    h = assemble_hamiltonian(LatticeParams(sites=8, mass=0.7, quanta=quanta, coupling=0.3))
    assert h.hermiticity_defect() <= 1e-12
    assert h.spectral_radius_bound() >= np.max(np.abs(np.linalg.eigvalsh(h.dense())))


@pytest.mark.parametrize("seed", range(100))
def test_hermitian_for_random_parameters(seed):
    rng = np.random.default_rng(seed)
    sites = 2 * int(rng.integers(1, 6))
    params = LatticeParams(
        sites=sites,
        spacing=float(rng.uniform(0.2, 2.0)),
        mass=float(rng.uniform(0.0, 2.0)),
        quanta=int(rng.integers(0, sites + 1)),
        coupling=float(rng.normal(0.0, 1.0)),
    )
    h = assemble_hamiltonian(params)
    assert h.hermiticity_defect() <= 1e-12
    dense = h.dense()
    assert np.allclose(dense, dense.conj().T, atol=1e-12)


def test_one_quantum_hopping_and_mass():
    params = LatticeParams(sites=8, spacing=0.5, mass=0.3, quanta=1)
    basis = enumerate_sector(params)
    h = assemble_hamiltonian(params, basis).dense()
    hop = 1.0 / (2.0 * params.spacing)
    for k in range(params.sites):
        source, right = basis.rank((k,)), basis.rank(((k + 1) % params.sites,))
        assert h[right, source] == pytest.approx(1j * hop)
        assert h[source, right] == pytest.approx(-1j * hop)
        assert h[source, source] == pytest.approx((-1) ** k * params.mass)


def test_seam_sign_with_two_quanta():
    params = LatticeParams(sites=8, spacing=1.0, mass=0.0, quanta=2)
    basis = enumerate_sector(params)
    h = assemble_hamiltonian(params, basis).dense()
    # bulk hop of the first quantum past nothing
    assert h[basis.rank((3, 5)), basis.rank((2, 5))] == pytest.approx(0.5j)
    # the quantum at 7 wraps to 0 across the other quantum
    assert h[basis.rank((0, 1)), basis.rank((1, 7))] == pytest.approx(-0.5j)


def test_blocked_hops_are_absent():
    params = LatticeParams(sites=8, quanta=2)
    basis = enumerate_sector(params)
    h = assemble_hamiltonian(params, basis).dense()
    source = basis.rank((2, 3))
    reachable = set(np.flatnonzero(h[:, source])) - {source}
    expected = {basis.rank(c) for c in [(1, 3), (2, 4)]}
    assert reachable == expected


def test_without_hopping_only_the_diagonal_survives():
    params = LatticeParams(sites=8, mass=0.5, quanta=2, coupling=1.0)
    h = assemble_hamiltonian(params, hopping=False).dense()
    assert np.array_equal(h, np.diag(np.diag(h)))
