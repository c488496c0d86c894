import math

import numpy as np
import pytest

from beable_sdk.exceptions import GridMismatch, ValidationError
from beable_sdk.fock import ModeSet, commutator_summary, pair_creation_element, smeared_density_commutator

POINTS = 8
LENGTH = 8.0
MASS = 1.0
DP = 2.0 * math.pi / LENGTH


@pytest.fixture
def grid():
    return LENGTH * np.arange(POINTS) / POINTS


@pytest.fixture
def modes():
    return ModeSet.from_momenta([DP, 2 * DP], [DP, 2 * DP], mass=MASS, momentum_spacing=DP)


def gaussian(x, center=4.0, width=1.0):
    return np.exp(-((x - center) ** 2) / (2.0 * width ** 2))


def test_localized_smearing_does_not_commute_with_particle_number(grid, modes):
    result = smeared_density_commutator(gaussian(grid), grid, modes)
    assert result.max_abs > 1e-6
    assert abs(result.pair_element) > 1e-6
    assert result.pair == (2 * DP, 2 * DP)


def test_pair_element_matches_closed_form(grid, modes):
    for pair in [(DP, DP), (DP, 2 * DP), (2 * DP, DP), (2 * DP, 2 * DP)]:
        result = smeared_density_commutator(gaussian(grid), grid, modes, pair=pair)
        assert abs(result.pair_element - result.closed_form) <= 1e-10
        assert result.closed_form == pytest.approx(pair_creation_element(gaussian(grid), grid, *pair, MASS))


def test_constant_smearing_commutes(grid, modes):
    result = smeared_density_commutator(np.ones(POINTS), grid, modes)
    assert result.max_abs <= 1e-10


def test_summary_reports_moduli(grid, modes):
    result = smeared_density_commutator(gaussian(grid), grid, modes)
    summary = commutator_summary(result)
    assert summary["max_abs_commutator"] == result.max_abs
    assert summary["pair_modulus"] == pytest.approx(abs(result.pair_element))
    assert summary["closed_form_modulus"] == pytest.approx(summary["pair_modulus"], abs=1e-10)
    assert summary["closed_form_deviation"] <= 1e-10


def test_density_is_hermitian(grid, modes):
    result = smeared_density_commutator(gaussian(grid), grid, modes)
    density = result.density.matrix
    assert np.allclose(density, density.conj().T, atol=1e-12)


def test_incompatible_grid_is_rejected(modes):
    half_step = 0.5 * np.arange(POINTS)
    with pytest.raises(GridMismatch):
        smeared_density_commutator(np.ones(POINTS), half_step, modes)


def test_momentum_off_the_reciprocal_grid_is_rejected(grid):
    modes = ModeSet.from_momenta([1.5 * DP], [DP], mass=MASS, momentum_spacing=DP)
    with pytest.raises(GridMismatch):
        smeared_density_commutator(np.ones(POINTS), grid, modes)


def test_smearing_shape_must_match_grid(grid, modes):
    with pytest.raises(GridMismatch):
        smeared_density_commutator(np.ones(POINTS + 1), grid, modes)


def test_pair_needs_both_species(grid):
    modes = ModeSet.from_momenta([DP, 2 * DP], [], mass=MASS, momentum_spacing=DP)
    with pytest.raises(ValidationError):
        smeared_density_commutator(gaussian(grid), grid, modes)


def test_unknown_pair_momenta(grid, modes):
    with pytest.raises(ValidationError):
        smeared_density_commutator(gaussian(grid), grid, modes, pair=(3 * DP, DP))
