"""Connection-probability rules over vertex pairs and the clamping policy.

All three kernels are evaluated with the same floating-point expression
here, in the numpy fallback and in the compiled core, so a pair's
probability is bit-identical on every path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .degseq import DegreeSequence
from .errors import InfeasiblePair, InvalidParams, ParameterMismatch

__all__ = [
    "ClampPolicy",
    "Additive",
    "ChungLu",
    "Constant",
    "Kernel",
    "ClampReport",
    "pair_prob",
    "validate_feasibility",
    "extreme_pairs",
    "kernel_for_sequence",
    "probability_matrix",
    "KERNEL_NAMES",
]


class ClampPolicy(str, Enum):
    STRICT = "strict"
    CLAMP = "clamp"


# integer codes understood by the pair-sweep backends
KIND_ADDITIVE = 0
KIND_CHUNG_LU = 1
KIND_CONSTANT = 2


@dataclass(frozen=True)
class Additive:
    """p_ij = (k_i + k_j - z) / n."""

    z: float
    n: int
    clamp_policy: ClampPolicy = ClampPolicy.STRICT

    name = "additive"
    kind = KIND_ADDITIVE

    def __post_init__(self):
        if not (math.isfinite(self.z) and self.z > 0):
            raise InvalidParams(f"additive kernel needs z > 0, got {self.z}")
        if int(self.n) != self.n or self.n < 2:
            raise InvalidParams(f"additive kernel needs n >= 2, got {self.n}")
        object.__setattr__(self, "clamp_policy", ClampPolicy(self.clamp_policy))

    def raw(self, k_i, k_j):
        return (k_i + k_j - self.z) / self.n

    @property
    def core_params(self) -> tuple[int, float, float]:
        return self.kind, float(self.z), float(self.n)

    def params(self) -> dict:
        return {"z": self.z, "n": self.n}


@dataclass(frozen=True)
class ChungLu:
    """p_ij = k_i k_j / 2m."""

    two_m: float
    clamp_policy: ClampPolicy = ClampPolicy.STRICT

    name = "chung-lu"
    kind = KIND_CHUNG_LU

    def __post_init__(self):
        if not (math.isfinite(self.two_m) and self.two_m > 0):
            raise InvalidParams(f"Chung-Lu kernel needs two_m > 0, got {self.two_m}")
        object.__setattr__(self, "clamp_policy", ClampPolicy(self.clamp_policy))

    def raw(self, k_i, k_j):
        return k_i * k_j / self.two_m

    @property
    def core_params(self) -> tuple[int, float, float]:
        return self.kind, float(self.two_m), 0.0

    def params(self) -> dict:
        return {"two_m": self.two_m}


@dataclass(frozen=True)
class Constant:
    """p_ij = p for every pair (classical random graph)."""

    p: float
    clamp_policy: ClampPolicy = ClampPolicy.STRICT

    name = "constant"
    kind = KIND_CONSTANT

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise InvalidParams(f"constant kernel needs 0 <= p <= 1, got {self.p}")
        object.__setattr__(self, "clamp_policy", ClampPolicy(self.clamp_policy))

    def raw(self, k_i, k_j):
        if isinstance(k_i, np.ndarray) or isinstance(k_j, np.ndarray):
            return np.full(np.broadcast(k_i, k_j).shape, self.p, dtype=float)
        return self.p

    @property
    def core_params(self) -> tuple[int, float, float]:
        return self.kind, float(self.p), 0.0

    def params(self) -> dict:
        return {"p": self.p}


Kernel = Additive | ChungLu | Constant

KERNEL_NAMES = ("additive", "chung-lu", "constant")


def describe(kernel: Kernel) -> dict:
    return {"name": kernel.name, **kernel.params(), "clamp_policy": kernel.clamp_policy.value}


@dataclass(frozen=True)
class ClampReport:
    clamped_low: int = 0
    clamped_high: int = 0
    total_pairs: int = 0

    @property
    def clean(self) -> bool:
        return self.clamped_low == 0 and self.clamped_high == 0

    def __add__(self, other: "ClampReport") -> "ClampReport":
        return ClampReport(
            self.clamped_low + other.clamped_low,
            self.clamped_high + other.clamped_high,
            self.total_pairs + other.total_pairs,
        )

    def as_dict(self) -> dict:
        return {
            "clamped_low": self.clamped_low,
            "clamped_high": self.clamped_high,
            "total_pairs": self.total_pairs,
        }


def pair_prob(kernel: Kernel, k_i: int, k_j: int) -> tuple[float, bool]:
    """Connection probability of one pair and whether it was clamped."""
    if k_i < 1 or k_j < 1:
        raise InvalidParams(f"degrees must be >= 1, got ({k_i}, {k_j})")
    raw = float(kernel.raw(k_i, k_j))
    if 0.0 <= raw <= 1.0:
        return raw, False
    if kernel.clamp_policy is ClampPolicy.STRICT:
        raise InfeasiblePair(
            f"{kernel.name} kernel gives p={raw!r} for degrees ({k_i}, {k_j}); "
            "use the clamp policy to force it into [0, 1]"
        )
    return min(max(raw, 0.0), 1.0), True


def _check_matches(kernel: Kernel, seq: DegreeSequence) -> None:
    if isinstance(kernel, Additive):
        if kernel.n != seq.n:
            raise ParameterMismatch(f"kernel n={kernel.n} but sequence has n={seq.n}")
        if not math.isclose(kernel.z, seq.avg_degree, rel_tol=1e-12):
            raise ParameterMismatch(f"kernel z={kernel.z} but sequence has z={seq.avg_degree}")


def _full_census(kernel: Kernel, degrees: np.ndarray) -> tuple[int, int]:
    k = degrees.astype(float)
    low = high = 0
    for i in range(k.size - 1):
        raw = kernel.raw(k[i], k[i + 1 :])
        low += int(np.count_nonzero(raw < 0.0))
        high += int(np.count_nonzero(raw > 1.0))
    return low, high


def validate_feasibility(kernel: Kernel, seq: DegreeSequence, full: bool = False) -> ClampReport:
    """Count vertex pairs whose raw probability falls outside [0, 1].

    The count is taken over classes of equal degree, weighted by the number
    of vertex pairs in each class pair, which is exact and O(U^2) in the
    number U of distinct degrees. ``full=True`` enumerates every vertex pair
    instead.
    """
    _check_matches(kernel, seq)
    n = seq.n
    total = n * (n - 1) // 2
    if full:
        low, high = _full_census(kernel, seq.degrees)
        return ClampReport(low, high, total)
    values, counts = seq.distinct_degrees()
    v = values.astype(float)
    raw = np.asarray(kernel.raw(v[:, None], v[None, :]), dtype=float)
    c = counts.astype(np.int64)
    pairs = np.outer(c, c)
    np.fill_diagonal(pairs, c * (c - 1) // 2)
    pairs = np.triu(pairs)
    low = int(pairs[raw < 0.0].sum())
    high = int(pairs[raw > 1.0].sum())
    return ClampReport(low, high, total)


def extreme_pairs(kernel: Kernel, seq: DegreeSequence) -> tuple[float, float]:
    """Raw probabilities of the lowest-degree and highest-degree vertex pairs.

    Additive and Chung-Lu kernels are increasing in both degrees, so these
    two pairs bound every other pair.
    """
    k = np.sort(seq.degrees)
    lo = float(kernel.raw(int(k[0]), int(k[1])))
    hi = float(kernel.raw(int(k[-1]), int(k[-2])))
    return lo, hi


def kernel_for_sequence(
    name: str, seq: DegreeSequence, clamp_policy: ClampPolicy | str = ClampPolicy.STRICT
) -> Kernel:
    policy = ClampPolicy(clamp_policy)
    if name == "additive":
        return Additive(z=seq.avg_degree, n=seq.n, clamp_policy=policy)
    if name == "chung-lu":
        return ChungLu(two_m=float(seq.degree_sum), clamp_policy=policy)
    if name == "constant":
        return Constant(p=seq.avg_connect_prob, clamp_policy=policy)
    raise InvalidParams(f"unknown kernel {name!r}; expected one of {', '.join(KERNEL_NAMES)}")


def probability_matrix(kernel: Kernel, seq: DegreeSequence) -> np.ndarray:
    """Dense N x N matrix of pair probabilities with a zero diagonal."""
    k = seq.degrees.astype(float)
    raw = np.asarray(kernel.raw(k[:, None], k[None, :]), dtype=float)
    np.fill_diagonal(raw, 0.0)
    if np.any(raw < 0.0) or np.any(raw > 1.0):
        if kernel.clamp_policy is ClampPolicy.STRICT:
            raise InfeasiblePair(f"{kernel.name} kernel has pairs outside [0, 1] for this sequence")
        raw = np.clip(raw, 0.0, 1.0)
    return raw
