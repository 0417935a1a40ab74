"""Closed-form predictions of the additive-kernel ensemble from a degree sequence.

With z the mean degree, p = z/N and Q the degree variance:

    K_nn(k)  = z k + Q             (neighbor-degree sum)
    k_nn(k)  = z + Q / k
    C(k)     = p + 2Q / (N k)
    C        = p + (2Q / N) <1/k>
    r        = -Q^2 / (<k><k^3> - <k^2>^2)
    C(k)     = (2/N) k_nn(k) - p
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .degseq import DegreeSequence
from .errors import InvalidParams
from .kernel import Kernel, probability_matrix

__all__ = [
    "AnalyticPrediction",
    "predict",
    "predict_knn",
    "predict_knn_sum",
    "predict_r",
    "predict_r_from_sums",
    "predict_clustering_of_k",
    "predict_mean_clustering",
    "predict_expected_degree",
    "predict_expected_triangles_at",
]


def _check_k(k):
    if np.any(np.asarray(k) < 1):
        raise InvalidParams(f"degree must be >= 1, got {k}")


def predict_knn(seq: DegreeSequence, k):
    _check_k(k)
    return seq.avg_degree + seq.variance_q / k


def predict_knn_sum(seq: DegreeSequence, k):
    _check_k(k)
    return seq.avg_degree * k + seq.variance_q


def predict_clustering_of_k(seq: DegreeSequence, k):
    _check_k(k)
    return seq.avg_connect_prob + 2 * seq.variance_q / (seq.n * k)


def predict_mean_clustering(seq: DegreeSequence) -> float:
    return seq.avg_connect_prob + (2 * seq.variance_q / seq.n) * seq.inv_degree_mean


def predict_r_from_sums(count: int, s1: int, s2: int, s3: int) -> Optional[float]:
    """Predicted r from integer power sums of a degree population.

    In terms of the sums, -Q^2 / (<k><k^3> - <k^2>^2) becomes
    -(N s2 - s1^2)^2 / (N^2 (s1 s3 - s2^2)), which is evaluated exactly.
    """
    den = s1 * s3 - s2 * s2
    if den <= 0:
        return None
    num = count * s2 - s1 * s1
    return float(Fraction(-num * num, count * count * den))


def predict_r(seq: DegreeSequence) -> Optional[float]:
    """Predicted assortativity; None for degenerate (e.g. regular) sequences."""
    s1, s2, s3 = seq._power_sums
    return predict_r_from_sums(seq.n, s1, s2, s3)


def predict_expected_degree(seq: DegreeSequence, i: int) -> tuple[float, float]:
    """Expected degree of vertex i: (idealized k_i, simple-graph value).

    The idealized identity sums p_ij over all j including j = i. Without
    self-pairs the expectation is k_i - (2 k_i - z) / N.
    """
    if not 0 <= i < seq.n:
        raise IndexError(f"vertex {i} out of range for n={seq.n}")
    k = int(seq.degrees[i])
    return float(k), k - (2 * k - seq.avg_degree) / seq.n


def predict_expected_triangles_at(seq: DegreeSequence, kernel: Kernel, i: int) -> float:
    """Exact E[E_i] = sum over m < n (both != i) of p_im p_in p_mn."""
    if not 0 <= i < seq.n:
        raise IndexError(f"vertex {i} out of range for n={seq.n}")
    p = probability_matrix(kernel, seq)
    row = p[i].copy()
    row[i] = 0.0
    # sum_{m<n} row_m row_n p_mn = (1/2) row^T P row, the diagonal of P being 0
    terms = (row[:, None] * row[None, :] * p)[np.triu_indices(seq.n, k=1)]
    return math.fsum(terms)


@dataclass(frozen=True)
class AnalyticPrediction:
    n: int
    z: float
    p: float
    q: float
    inv_degree_mean: float
    mean_clustering: float
    r: Optional[float]

    @property
    def linear_slope(self) -> float:
        return 2 / self.n

    @property
    def linear_intercept(self) -> float:
        return -self.p

    def knn_of_k(self, k):
        return self.z + self.q / k

    def knn_sum_of_k(self, k):
        return self.z * k + self.q

    def clustering_of_k(self, k):
        return self.p + 2 * self.q / (self.n * k)

    def table(self, degrees) -> list[tuple[int, float, float]]:
        return [(int(k), float(self.knn_of_k(k)), float(self.clustering_of_k(k))) for k in degrees]

    def scalars(self) -> dict:
        return {
            "n": self.n,
            "z": self.z,
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "mean_clustering": self.mean_clustering,
            "linear_slope": self.linear_slope,
            "linear_intercept": self.linear_intercept,
        }


def predict(seq: DegreeSequence) -> AnalyticPrediction:
    return AnalyticPrediction(
        n=seq.n,
        z=seq.avg_degree,
        p=seq.avg_connect_prob,
        q=seq.variance_q,
        inv_degree_mean=seq.inv_degree_mean,
        mean_clustering=predict_mean_clustering(seq),
        r=predict_r(seq),
    )
