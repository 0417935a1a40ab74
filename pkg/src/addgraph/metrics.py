"""Realized structure of a single graph: degrees, k_nn, clustering, assortativity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from . import _backend
from .errors import NoEligibleVertices
from .generator import Graph

__all__ = [
    "VertexMetrics",
    "VertexStats",
    "vertex_stats",
    "vertex_metrics",
    "assortativity",
    "assortativity_from_stats",
    "mean_clustering",
    "mean_clustering_from_stats",
]


@dataclass(frozen=True)
class VertexMetrics:
    degree: int
    knn: Optional[float]
    clustering: Optional[float]


class VertexStats(NamedTuple):
    """Integer per-vertex statistics; every metric here is derived from them."""

    degree: np.ndarray
    neighbor_degree_sum: np.ndarray
    triangles: np.ndarray


def vertex_stats(g: Graph, backend: str | None = None) -> VertexStats:
    impl = _backend.get(backend)
    deg, nbr, tri = impl.vertex_stats(g.n, g.edges[:, 0], g.edges[:, 1])
    return VertexStats(deg, nbr, tri)


def knn_values(stats: VertexStats) -> np.ndarray:
    """Mean neighbor degree per vertex, NaN where the degree is 0."""
    d = stats.degree
    out = np.full(d.shape, np.nan)
    ok = d > 0
    out[ok] = stats.neighbor_degree_sum[ok] / d[ok]
    return out


def clustering_values(stats: VertexStats) -> np.ndarray:
    """Local clustering 2T/(d(d-1)) per vertex, NaN where the degree is below 2."""
    d = stats.degree
    out = np.full(d.shape, np.nan)
    ok = d > 1
    out[ok] = 2 * stats.triangles[ok] / (d[ok] * (d[ok] - 1))
    return out


def vertex_metrics(g: Graph) -> list[VertexMetrics]:
    stats = vertex_stats(g)
    knn = knn_values(stats)
    cc = clustering_values(stats)
    return [
        VertexMetrics(
            int(stats.degree[i]),
            None if math.isnan(knn[i]) else float(knn[i]),
            None if math.isnan(cc[i]) else float(cc[i]),
        )
        for i in range(g.n)
    ]


def assortativity_from_stats(stats: VertexStats) -> Optional[float]:
    # Sums over edges in both orientations reduce to vertex sums:
    #   sum j*k = sum_i d_i S_i,  sum j = sum_i d_i^2,  sum j^2 = sum_i d_i^3
    # with S_i the neighbor-degree sum; everything stays an exact integer.
    d = stats.degree.astype(object)
    two_m = int(d.sum())
    if two_m == 0:
        return None
    s_jk = int((d * stats.neighbor_degree_sum.astype(object)).sum())
    s_j = int((d * d).sum())
    s_jj = int((d * d * d).sum())
    num = two_m * s_jk - s_j * s_j
    den = two_m * s_jj - s_j * s_j
    if den <= 0:
        return None
    return float(Fraction(num, den))


def assortativity(g: Graph) -> Optional[float]:
    """Newman's degree correlation r over edge endpoints; None if undefined."""
    return assortativity_from_stats(vertex_stats(g))


def mean_clustering_from_stats(stats: VertexStats) -> float:
    cc = clustering_values(stats)
    vals = cc[~np.isnan(cc)]
    if vals.size == 0:
        raise NoEligibleVertices("no vertex has degree >= 2")
    return math.fsum(vals) / vals.size


def mean_clustering(g: Graph) -> float:
    """Average local clustering over vertices with degree >= 2."""
    return mean_clustering_from_stats(vertex_stats(g))
