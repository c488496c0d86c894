import math

import numpy as np
import pytest

from beable_sdk.lattice import (
    dispersion,
    doubling_report,
    expected_spectrum,
    naive_dirac_matrix,
    reduced_momenta,
    single_particle_spectrum,
)
from beable_sdk.models.types import LatticeParams


def test_lattice_momentum():
    params = LatticeParams(sites=8, spacing=0.5, mass=0.3)
    point = dispersion(1.0, params)
    assert point.p_lat == pytest.approx(math.sin(0.5) / 0.5)
    assert point.e_lat == pytest.approx(math.hypot(point.p_lat, 0.3))


def test_reduced_momenta():
    params = LatticeParams(sites=8, spacing=1.0)
    assert np.allclose(reduced_momenta(params), math.pi * np.arange(4) / 4)


@pytest.mark.parametrize("spacing", [1.0, 0.25])
def test_spectrum_matches_dispersion(spacing):
    params = LatticeParams(sites=32, spacing=spacing, mass=0.5)
    assert np.max(np.abs(single_particle_spectrum(params) - expected_spectrum(params))) <= 1e-10


def test_massive_spectrum_splits_evenly():
    report = doubling_report(LatticeParams(sites=32, mass=0.5))
    assert report.positive_levels == 16
    assert report.negative_levels == 16
    assert report.zero_levels == 0
    assert report.max_staggered_multiplicity <= 2
    assert report.max_dispersion_error <= 1e-10


def test_massless_staggered_halves_the_naive_doubling():
    report = doubling_report(LatticeParams(sites=8, mass=0.0))
    assert report.massless_zero_modes
    assert report.zero_levels == 2
    assert report.max_staggered_multiplicity == 2
    assert report.max_naive_multiplicity == 4
    zero = report.naive_degeneracy[f"{0.0:.8f}"]
    assert (zero.staggered, zero.naive) == (2, 4)


def test_naive_operator_is_hermitian():
    matrix = naive_dirac_matrix(LatticeParams(sites=8, mass=0.4))
    assert matrix.shape == (16, 16)
    assert np.allclose(matrix, matrix.conj().T)
