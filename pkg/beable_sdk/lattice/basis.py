"""
Fixed fermion-number sector of the staggered lattice.

A configuration (the beable) is the strictly increasing tuple of the ω occupied
sites. Configurations are ranked lexicographically.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence, Tuple

import numpy as np

from ..exceptions import SectorTooLarge, ValidationError
from ..models.types import LatticeParams

logger = logging.getLogger(__name__)

DEFAULT_DIMENSION_CAP = 2_000_000

Configuration = Tuple[int, ...]


@dataclass(frozen=True)
class SectorBasis:
    """Lexicographically ordered configurations of ω quanta on 2N sites."""

    params: LatticeParams
    configurations: np.ndarray = field(repr=False)  # (dimension, ω) int64
    _binomials: np.ndarray = field(repr=False)

    @property
    def sites(self) -> int:
        return self.params.sites

    @property
    def quanta(self) -> int:
        return self.params.quanta

    @property
    def dimension(self) -> int:
        return self.configurations.shape[0]

    def __len__(self) -> int:
        return self.dimension

    def unrank(self, index: int) -> Configuration:
        if not 0 <= index < self.dimension:
            raise IndexError(f"rank {index} outside [0, {self.dimension})")
        return tuple(int(s) for s in self.configurations[index])

    def rank(self, config: Sequence[int]) -> int:
        return int(self.rank_many(np.asarray([self.validate(config)], dtype=np.int64))[0])

    def rank_many(self, configs: np.ndarray) -> np.ndarray:
        """Ranks of a (batch, ω) array of sorted configurations."""
        n, k = self.sites, self.quanta
        configs = np.asarray(configs, dtype=np.int64)
        if k == 0:
            return np.zeros(max(configs.shape[0], 1), dtype=np.int64)
        configs = configs.reshape(-1, k)
        total = self._binomials[n, k]
        # lexicographic rank = C(n,k) - 1 - Σ_i C(n-1-c_i, k-i)
        steps = k - np.arange(k)
        return total - 1 - self._binomials[n - 1 - configs, steps].sum(axis=1)

    def validate(self, config: Sequence[int]) -> Configuration:
        config = tuple(int(s) for s in config)
        if len(config) != self.quanta:
            raise ValidationError(f"configuration {config} does not hold {self.quanta} quanta")
        if any(b <= a for a, b in zip(config, config[1:])):
            raise ValidationError(f"configuration {config} is not strictly increasing")
        if config and (config[0] < 0 or config[-1] >= self.sites):
            raise ValidationError(f"configuration {config} leaves the lattice of {self.sites} sites")
        return config

    def occupations(self) -> np.ndarray:
        """(dimension, 2N) 0/1 occupation table."""
        occ = np.zeros((self.dimension, self.sites), dtype=np.int8)
        if self.quanta:
            rows = np.repeat(np.arange(self.dimension), self.quanta)
            occ[rows, self.configurations.ravel()] = 1
        return occ

    def amplitude(self, amplitudes: np.ndarray, sites: Iterable[int]) -> complex:
        """Ψ(k₁,…,k_ω) for sites in any order: antisymmetric, zero on repeated sites."""
        sites = [int(s) for s in sites]
        if len(set(sites)) != len(sites):
            return 0.0j
        order = np.argsort(sites)
        sign = _permutation_sign(order)
        return sign * complex(amplitudes[self.rank(sorted(sites))])


def _permutation_sign(order: np.ndarray) -> int:
    sign = 1
    seen = np.zeros(len(order), dtype=bool)
    for start in range(len(order)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sector_dimension(params: LatticeParams) -> int:
    return math.comb(params.sites, params.quanta)


def enumerate_sector(params: LatticeParams, cap: int = DEFAULT_DIMENSION_CAP) -> SectorBasis:
    """Enumerate all C(2N, ω) configurations in lexicographic order."""
    dimension = sector_dimension(params)
    if dimension > cap:
        raise SectorTooLarge(
            f"sector C({params.sites}, {params.quanta}) = {dimension} exceeds the cap of {cap}",
            details={"sites": params.sites, "quanta": params.quanta, "dimension": dimension, "cap": cap},
        )
    n, k = params.sites, params.quanta
    flat = np.fromiter(
        (s for config in combinations(range(n), k) for s in config),
        dtype=np.int64,
        count=dimension * k,
    )
    configurations = flat.reshape(dimension, k)
    binomials = np.array(
        [[math.comb(a, b) for b in range(k + 2)] for a in range(n + 1)],
        dtype=np.int64,
    )
    logger.debug(f"Enumerated sector 2N={n}, ω={k}: dimension {dimension}")
    return SectorBasis(params=params, configurations=configurations, _binomials=binomials)
