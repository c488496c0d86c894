import math

import numpy as np
import pytest

from beable_sdk.exceptions import SectorTooLarge, ValidationError
from beable_sdk.lattice import enumerate_sector, sector_dimension
from beable_sdk.models.types import LatticeParams


@pytest.fixture
def basis():
    return enumerate_sector(LatticeParams(sites=8, quanta=3))


def test_dimension(basis):
    assert basis.dimension == math.comb(8, 3) == 56
    assert sector_dimension(basis.params) == 56


def test_lexicographic_order(basis):
    assert basis.unrank(0) == (0, 1, 2)
    assert basis.unrank(1) == (0, 1, 3)
    assert basis.unrank(55) == (5, 6, 7)
    configs = [basis.unrank(i) for i in range(basis.dimension)]
    assert configs == sorted(configs)


def test_rank_inverts_unrank(basis):
    for index in range(basis.dimension):
        assert basis.rank(basis.unrank(index)) == index
    ranks = basis.rank_many(basis.configurations)
    assert np.array_equal(ranks, np.arange(basis.dimension))


def test_unrank_out_of_range(basis):
    with pytest.raises(IndexError):
        basis.unrank(56)


@pytest.mark.parametrize("config", [(0, 1), (2, 1, 3), (1, 1, 3), (0, 3, 8), (-1, 2, 3)])
def test_invalid_configurations(basis, config):
    with pytest.raises(ValidationError):
        basis.rank(config)


def test_amplitude_is_antisymmetric(basis):
    amplitudes = np.arange(basis.dimension, dtype=complex) + 1.0
    ordered = basis.amplitude(amplitudes, (0, 2, 5))
    assert ordered == amplitudes[basis.rank((0, 2, 5))]
    assert basis.amplitude(amplitudes, (2, 0, 5)) == -ordered
    assert basis.amplitude(amplitudes, (2, 5, 0)) == ordered
    assert basis.amplitude(amplitudes, (2, 2, 5)) == 0


def test_occupations(basis):
    occ = basis.occupations()
    assert occ.shape == (56, 8)
    assert np.all(occ.sum(axis=1) == 3)
    assert list(np.flatnonzero(occ[basis.rank((1, 4, 7))])) == [1, 4, 7]


def test_empty_and_full_sectors():
    empty = enumerate_sector(LatticeParams(sites=4, quanta=0))
    full = enumerate_sector(LatticeParams(sites=4, quanta=4))
    assert empty.dimension == 1
    assert full.dimension == 1
    assert full.unrank(0) == (0, 1, 2, 3)


def test_sector_cap():
    with pytest.raises(SectorTooLarge) as exc:
        enumerate_sector(LatticeParams(sites=16, quanta=4), cap=100)
    assert exc.value.details["dimension"] == math.comb(16, 4)
