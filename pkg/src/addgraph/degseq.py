"""Desired degree sequences: construction, sampling, moments and file IO."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import InvalidParams, SequenceParseError

__all__ = [
    "DegreeSequence",
    "PowerLawParams",
    "from_list",
    "regular_sequence",
    "sample_power_law",
    "sample_poisson",
    "power_law_pmf",
    "read_sequence",
    "write_sequence",
]


@dataclass(frozen=True, eq=False)
class DegreeSequence:
    """An immutable desired degree sequence with its cached moments.

    Sums of powers are kept as exact Python integers; every float moment is
    derived from them with a single rounding, so the cached values do not
    depend on the order of ``degrees``.
    """

    degrees: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.degrees)
        if arr.ndim != 1:
            raise InvalidParams("degree sequence must be one-dimensional")
        if arr.size < 2:
            raise InvalidParams(f"degree sequence needs at least 2 entries, got {arr.size}")
        if arr.dtype.kind not in "iu":
            if arr.dtype.kind == "f" and np.all(np.isfinite(arr)) and np.all(arr == np.round(arr)):
                arr = arr.astype(np.int64)
            else:
                raise InvalidParams("degrees must be integers")
        arr = arr.astype(np.int64, copy=True)
        if arr.min() < 1:
            bad = int(np.flatnonzero(arr < 1)[0])
            raise InvalidParams(f"degrees must be >= 1 (entry {bad} is {int(arr[bad])})")
        arr.setflags(write=False)
        object.__setattr__(self, "degrees", arr)

    @property
    def n(self) -> int:
        return int(self.degrees.size)

    @cached_property
    def _power_sums(self) -> tuple[int, int, int]:
        k = self.degrees.astype(object)
        return int(k.sum()), int((k * k).sum()), int((k * k * k).sum())

    @property
    def degree_sum(self) -> int:
        return self._power_sums[0]

    @cached_property
    def edge_count_expected(self) -> float:
        """l = (1/2) sum k_i."""
        return self.degree_sum / 2

    @cached_property
    def avg_degree(self) -> float:
        """z = sum k_i / N."""
        return self.degree_sum / self.n

    @cached_property
    def avg_connect_prob(self) -> float:
        """p = 2l / N^2 = z / N."""
        return self.degree_sum / (self.n * self.n)

    @cached_property
    def moment2(self) -> float:
        return self._power_sums[1] / self.n

    @cached_property
    def moment3(self) -> float:
        return self._power_sums[2] / self.n

    @cached_property
    def variance_q(self) -> float:
        """Q = <k^2> - <k>^2, evaluated exactly before rounding."""
        s1, s2, _ = self._power_sums
        return float(Fraction(self.n * s2 - s1 * s1, self.n * self.n))

    @cached_property
    def inv_degree_mean(self) -> float:
        return math.fsum(1.0 / self.degrees) / self.n

    # short aliases used throughout the formulas
    @property
    def z(self) -> float:
        return self.avg_degree

    @property
    def p(self) -> float:
        return self.avg_connect_prob

    @property
    def q(self) -> float:
        return self.variance_q

    @property
    def k_min(self) -> int:
        return int(self.degrees.min())

    @property
    def k_max(self) -> int:
        return int(self.degrees.max())

    def distinct_degrees(self) -> tuple[np.ndarray, np.ndarray]:
        """Sorted distinct degree values and their multiplicities."""
        return np.unique(self.degrees, return_counts=True)

    def moments(self) -> dict:
        return {
            "n": self.n,
            "z": self.avg_degree,
            "p": self.avg_connect_prob,
            "q": self.variance_q,
            "moment2": self.moment2,
            "moment3": self.moment3,
            "inv_degree_mean": self.inv_degree_mean,
        }

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"DegreeSequence(n={self.n}, z={self.avg_degree:.6g}, q={self.variance_q:.6g})"

    def same_as(self, other: "DegreeSequence") -> bool:
        return self.n == other.n and bool(np.array_equal(self.degrees, other.degrees))


@dataclass(frozen=True)
class PowerLawParams:
    gamma: float
    k_min: int
    k_max: int

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and self.gamma > 1):
            raise InvalidParams(f"gamma must be > 1, got {self.gamma}")
        if int(self.k_min) != self.k_min or self.k_min < 1:
            raise InvalidParams(f"k_min must be an integer >= 1, got {self.k_min}")
        if int(self.k_max) != self.k_max or self.k_max < self.k_min:
            raise InvalidParams(f"k_max must be an integer >= k_min, got {self.k_max}")


def from_list(degrees: Iterable[int]) -> DegreeSequence:
    """Build a sequence from explicit degrees."""
    arr = np.asarray(list(degrees) if not isinstance(degrees, np.ndarray) else degrees)
    if arr.size == 0:
        raise InvalidParams("degree sequence is empty")
    return DegreeSequence(arr)


def regular_sequence(n: int, k: int) -> DegreeSequence:
    if n < 2:
        raise InvalidParams(f"n must be >= 2, got {n}")
    if not 1 <= k <= n - 1:
        raise InvalidParams(f"regular degree must satisfy 1 <= k <= n-1 = {n - 1}, got {k}")
    return DegreeSequence(np.full(n, k, dtype=np.int64))


def power_law_pmf(params: PowerLawParams) -> tuple[np.ndarray, np.ndarray]:
    """Support and exact finite-normalized probabilities of P(k) ~ k^-gamma."""
    support = np.arange(params.k_min, params.k_max + 1, dtype=np.int64)
    weights = support.astype(float) ** (-params.gamma)
    return support, weights / math.fsum(weights)


def sample_power_law(n: int, params: PowerLawParams, seed) -> DegreeSequence:
    """Draw n i.i.d. degrees from the truncated discrete power law by inverse CDF."""
    if n < 2:
        raise InvalidParams(f"n must be >= 2, got {n}")
    if params.k_max > n - 1:
        raise InvalidParams(f"k_max must be <= n-1 = {n - 1}, got {params.k_max}")
    support, pmf = power_law_pmf(params)
    cdf = np.cumsum(pmf)
    cdf[-1] = 1.0
    u = np.random.default_rng(seed).random(n)
    idx = np.searchsorted(cdf, u, side="right")
    return DegreeSequence(support[idx])


def sample_poisson(n: int, mean: float, seed) -> DegreeSequence:
    """Poisson(mean) degrees conditioned on k >= 1; zeros are redrawn."""
    if n < 2:
        raise InvalidParams(f"n must be >= 2, got {n}")
    if not (math.isfinite(mean) and mean > 0):
        raise InvalidParams(f"Poisson mean must be > 0, got {mean}")
    rng = np.random.default_rng(seed)
    k = rng.poisson(mean, size=n)
    zeros = np.flatnonzero(k == 0)
    while zeros.size:
        k[zeros] = rng.poisson(mean, size=zeros.size)
        zeros = zeros[k[zeros] == 0]
    return DegreeSequence(k)


def read_sequence(path: str | os.PathLike) -> DegreeSequence:
    """Load a one-integer-per-line file; blank or malformed lines are errors."""
    degrees = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text:
                raise SequenceParseError("blank line", line=lineno, path=path)
            try:
                value = int(text)
            except ValueError:
                raise SequenceParseError(f"not an integer: {text!r}", line=lineno, path=path) from None
            if value < 1:
                raise SequenceParseError(f"degree must be >= 1, got {value}", line=lineno, path=path)
            degrees.append(value)
    if len(degrees) < 2:
        raise SequenceParseError(f"need at least 2 degrees, found {len(degrees)}", path=path)
    return DegreeSequence(np.asarray(degrees, dtype=np.int64))


def write_sequence(seq: DegreeSequence, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(str(int(k)) for k in seq.degrees))
        fh.write("\n")
