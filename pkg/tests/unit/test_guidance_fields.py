import math

import numpy as np
import pytest

from beable_sdk.exceptions import OddSiteCount, OutOfGrid, ValidationError
from beable_sdk.guidance import (
    SpinorField,
    current_density,
    guidance_field,
    sector_to_spinor,
    staggered_to_spinor,
)
from beable_sdk.lattice import enumerate_sector
from beable_sdk.models.types import LatticeParams


def uniform_spinor(spinor, points=16, time=0.0):
    x_grid = np.arange(points, dtype=float)
    values = np.tile(np.asarray(spinor, dtype=complex), (points, 1)) / math.sqrt(points)
    return SpinorField(x_grid, values, time)


def test_odd_site_count():
    with pytest.raises(OddSiteCount):
        staggered_to_spinor(np.ones(7), spacing=1.0)


def test_cells_pair_even_and_odd_sites():
    amplitudes = np.arange(8, dtype=complex)
    field_ = staggered_to_spinor(amplitudes, spacing=0.5)
    assert np.allclose(field_.x_grid, [0.0, 1.0, 2.0, 3.0])
    assert np.allclose(field_.values[:, 0], amplitudes[0::2])
    assert np.allclose(field_.values[:, 1], amplitudes[1::2])


@pytest.mark.parametrize("sector", ["one_quantum_sector", "two_quanta_sector"])
def test_sector_spinor_is_normalized(sector, request):
    basis, _, state = request.getfixturevalue(sector)
    field_ = sector_to_spinor(state.amplitudes, basis)
    assert field_.quanta == basis.quanta
    assert field_.values.shape == (4, 2) * basis.quanta
    assert field_.norm() == pytest.approx(1.0, abs=1e-12)


def test_two_quanta_spinor_is_antisymmetric(two_quanta_sector):
    basis, _, state = two_quanta_sector
    values = sector_to_spinor(state.amplitudes, basis).values
    assert np.allclose(values, -np.transpose(values, (2, 3, 0, 1)))


def test_empty_sector_has_no_spinor():
    basis = enumerate_sector(LatticeParams(sites=4, quanta=0))
    with pytest.raises(ValidationError):
        sector_to_spinor(np.ones(1), basis)


def test_one_quantum_current():
    field_ = uniform_spinor(np.array([1.0, 1j]) / np.sqrt(2.0))
    guidance = guidance_field(field_)
    # 2 Re(Ψ₁* Ψ₂) vanishes for a relative phase of i
    assert np.allclose(guidance.currents[0], 0.0)
    assert guidance.integral() == pytest.approx(1.0)


def test_interpolation_and_grid_bounds():
    field_ = uniform_spinor(np.array([1.0, 1.0]) / np.sqrt(2.0))
    rho, current = current_density(field_, np.array([[3.25]]))
    assert current[0, 0] / rho[0] == pytest.approx(1.0)
    with pytest.raises(OutOfGrid):
        current_density(field_, np.array([[16.0]]))
    with pytest.raises(ValidationError):
        current_density(field_, np.array([[1.0, 2.0]]))


def test_global_phase_leaves_density_and_current_unchanged(one_quantum_sector):
    basis, _, state = one_quantum_sector
    plain = guidance_field(sector_to_spinor(state.amplitudes, basis))
    shifted = guidance_field(sector_to_spinor(state.with_phase(-0.8).amplitudes, basis))
    assert np.allclose(shifted.density, plain.density, atol=1e-14)
    assert np.allclose(shifted.currents, plain.currents, atol=1e-14)
