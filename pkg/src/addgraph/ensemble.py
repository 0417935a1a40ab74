"""Monte-Carlo ensembles of realizations and their aggregated statistics.

Per-vertex values are pooled by the vertex's realized degree. The pools
keep integer sufficient statistics (counts, sums and sums of squares of
neighbor-degree sums and triangle counts), so aggregation is exact and a
summary does not depend on how realizations were split across workers or
merged. Scalars that are not integers (r and mean clustering of each
realization) are stored per realization and reduced with ``math.fsum``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from . import _backend
from .degseq import DegreeSequence
from .errors import IncompatibleSummaries, InsufficientData, InvalidParams
from .generator import _checked_report, _draw
from .kernel import ClampReport, Kernel
from .metrics import VertexStats, assortativity_from_stats, clustering_values
from .rng import check_seed, realization_seed

__all__ = [
    "DegreeSpectrum",
    "EnsembleSummary",
    "FitResult",
    "run_ensemble",
    "merge_summaries",
    "fit_power_slope",
    "fit_linear",
    "POOLING",
]

POOLING = "realized-degree, pooled over (vertex, realization)"

# realizations per work item handed to a worker
_CHUNK = 16


@dataclass(frozen=True, eq=False)
class DegreeSpectrum:
    """Per-degree mean, standard error and sample count of a vertex quantity."""

    degree: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    count: np.ndarray

    @classmethod
    def from_rows(cls, rows) -> "DegreeSpectrum":
        rows = sorted(rows)
        if not rows:
            return cls(np.empty(0, np.int64), np.empty(0), np.empty(0), np.empty(0, np.int64))
        d, m, s, c = zip(*rows)
        return cls(np.asarray(d, np.int64), np.asarray(m, float), np.asarray(s, float), np.asarray(c, np.int64))

    @property
    def rows(self) -> list[tuple[int, float, float, int]]:
        return [
            (int(d), float(m), float(s), int(c))
            for d, m, s, c in zip(self.degree, self.mean, self.stderr, self.count)
        ]

    def __len__(self) -> int:
        return int(self.degree.size)

    def row(self, degree: int) -> Optional[tuple[int, float, float, int]]:
        hit = np.flatnonzero(self.degree == degree)
        return self.rows[hit[0]] if hit.size else None

    def equals(self, other: "DegreeSpectrum") -> bool:
        return all(
            np.array_equal(a, b)
            for a, b in zip(
                (self.degree, self.mean, self.stderr, self.count),
                (other.degree, other.mean, other.stderr, other.count),
            )
        )


def _mean_stderr_scaled(count: int, s: int, ss: int, scale: int) -> tuple[float, float]:
    """Mean and standard error of values x = y / scale given sums of y and y^2."""
    mean = float(Fraction(s, count * scale))
    if count < 2:
        return mean, 0.0
    # sample variance of x, divided by count
    var_num = count * ss - s * s
    var_of_mean = Fraction(var_num, count * (count - 1) * count * scale * scale)
    return mean, math.sqrt(var_of_mean)


def _fsum_mean_stderr(values: np.ndarray) -> tuple[Optional[float], Optional[float], int]:
    vals = values[~np.isnan(values)]
    if vals.size == 0:
        return None, None, 0
    mean = math.fsum(vals) / vals.size
    if vals.size < 2:
        return mean, 0.0, int(vals.size)
    var = math.fsum((vals - mean) ** 2) / (vals.size - 1)
    return mean, math.sqrt(var / vals.size), int(vals.size)


def _zeros(n: int) -> np.ndarray:
    return np.zeros(n, dtype=object) + 0


@dataclass(frozen=True, eq=False)
class EnsembleSummary:
    seq: DegreeSequence
    kernel: Kernel
    master_seed: int
    ranges: tuple[tuple[int, int], ...]
    # per realized degree 0..n-1
    degree_counts: np.ndarray
    knn_count: np.ndarray
    knn_sum: np.ndarray
    knn_sumsq: np.ndarray
    cc_count: np.ndarray
    cc_sum: np.ndarray
    cc_sumsq: np.ndarray
    # per vertex
    vertex_degree_sum: np.ndarray
    vertex_degree_sumsq: np.ndarray
    vertex_triangle_sum: np.ndarray
    vertex_triangle_sumsq: np.ndarray
    # per realization, aligned with realization_index
    realization_index: np.ndarray
    r_values: np.ndarray
    clustering_values: np.ndarray
    edge_counts: np.ndarray
    clamp_totals: ClampReport = field(default_factory=ClampReport)

    @classmethod
    def empty(cls, seq: DegreeSequence, kernel: Kernel, master_seed: int) -> "EnsembleSummary":
        n = seq.n
        return cls(
            seq=seq,
            kernel=kernel,
            master_seed=check_seed(master_seed),
            ranges=(),
            degree_counts=_zeros(n),
            knn_count=_zeros(n),
            knn_sum=_zeros(n),
            knn_sumsq=_zeros(n),
            cc_count=_zeros(n),
            cc_sum=_zeros(n),
            cc_sumsq=_zeros(n),
            vertex_degree_sum=_zeros(n),
            vertex_degree_sumsq=_zeros(n),
            vertex_triangle_sum=_zeros(n),
            vertex_triangle_sumsq=_zeros(n),
            realization_index=np.empty(0, np.int64),
            r_values=np.empty(0),
            clustering_values=np.empty(0),
            edge_counts=np.empty(0, np.int64),
        )

    @property
    def realizations(self) -> int:
        return int(self.realization_index.size)

    @property
    def n(self) -> int:
        return self.seq.n

    @property
    def knn_spectrum(self) -> DegreeSpectrum:
        rows = []
        for d in np.flatnonzero(self.knn_count):
            c = int(self.knn_count[d])
            m, s = _mean_stderr_scaled(c, int(self.knn_sum[d]), int(self.knn_sumsq[d]), int(d))
            rows.append((int(d), m, s, c))
        return DegreeSpectrum.from_rows(rows)

    @property
    def clustering_spectrum(self) -> DegreeSpectrum:
        rows = []
        for d in np.flatnonzero(self.cc_count):
            c = int(self.cc_count[d])
            # C = 2T / (d(d-1)) = T / (d(d-1)/2)
            pairs = int(d) * (int(d) - 1) // 2
            m, s = _mean_stderr_scaled(c, int(self.cc_sum[d]), int(self.cc_sumsq[d]), pairs)
            rows.append((int(d), m, s, c))
        return DegreeSpectrum.from_rows(rows)

    @property
    def degree_histogram(self) -> dict[int, int]:
        return {int(d): int(self.degree_counts[d]) for d in np.flatnonzero(self.degree_counts)}

    def degree_power_sums(self) -> tuple[int, int, int, int]:
        """(count, sum d, sum d^2, sum d^3) over all pooled realized degrees."""
        d = np.arange(self.n, dtype=object)
        c = self.degree_counts
        return int(c.sum()), int((c * d).sum()), int((c * d * d).sum()), int((c * d * d * d).sum())

    def vertex_degree_mean(self) -> tuple[np.ndarray, np.ndarray]:
        return self._vertex_mean(self.vertex_degree_sum, self.vertex_degree_sumsq)

    def vertex_triangle_mean(self) -> tuple[np.ndarray, np.ndarray]:
        return self._vertex_mean(self.vertex_triangle_sum, self.vertex_triangle_sumsq)

    def _vertex_mean(self, s, ss) -> tuple[np.ndarray, np.ndarray]:
        r = self.realizations
        if r == 0:
            raise InsufficientData("summary holds no realizations")
        pairs = [_mean_stderr_scaled(r, int(a), int(b), 1) for a, b in zip(s, ss)]
        mean, err = zip(*pairs)
        return np.asarray(mean), np.asarray(err)

    @property
    def mean_r(self) -> tuple[Optional[float], Optional[float]]:
        m, s, _ = _fsum_mean_stderr(self.r_values)
        return m, s

    @property
    def r_defined_count(self) -> int:
        return int(np.count_nonzero(~np.isnan(self.r_values)))

    @property
    def mean_clustering(self) -> tuple[Optional[float], Optional[float]]:
        m, s, _ = _fsum_mean_stderr(self.clustering_values)
        return m, s

    @property
    def mean_edge_count(self) -> tuple[Optional[float], Optional[float]]:
        r = self.realizations
        if r == 0:
            return None, None
        e = self.edge_counts.astype(object)
        return _mean_stderr_scaled(r, int(e.sum()), int((e * e).sum()), 1)


_SUMMED = (
    "degree_counts", "knn_count", "knn_sum", "knn_sumsq", "cc_count", "cc_sum", "cc_sumsq",
    "vertex_degree_sum", "vertex_degree_sumsq", "vertex_triangle_sum", "vertex_triangle_sumsq",
)


def _bin_sums(n: int, keys: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    dtype = np.int64 if n <= 2000 else object
    s = np.zeros(n, dtype=dtype)
    ss = np.zeros(n, dtype=dtype)
    v = values.astype(dtype)
    np.add.at(s, keys, v)
    np.add.at(ss, keys, v * v)
    return s, ss


def _run_range(seq: DegreeSequence, kernel: Kernel, master_seed: int, start: int, stop: int,
               report: ClampReport, backend) -> EnsembleSummary:
    n = seq.n
    impl = _backend.get(backend)
    acc = EnsembleSummary.empty(seq, kernel, master_seed)
    # int64 is exact within one chunk: n^5 * _CHUNK < 2^63 for n <= 2000
    dtype = np.int64 if n <= 2000 else object
    fields = {name: np.zeros(n, dtype=dtype) for name in _SUMMED}
    count = stop - start
    r_vals = np.full(count, np.nan)
    c_vals = np.full(count, np.nan)
    edges = np.zeros(count, dtype=np.int64)
    for t in range(start, stop):
        u, v = _draw(seq, kernel, realization_seed(master_seed, t), backend)
        deg, nbr, tri = impl.vertex_stats(n, u, v)
        stats = VertexStats(deg, nbr, tri)
        i = t - start
        edges[i] = u.size

        fields["degree_counts"] += np.bincount(deg, minlength=n)
        has_nb = deg > 0
        s, ss = _bin_sums(n, deg[has_nb], nbr[has_nb])
        fields["knn_count"] += np.bincount(deg[has_nb], minlength=n)
        fields["knn_sum"] += s
        fields["knn_sumsq"] += ss
        eligible = deg > 1
        s, ss = _bin_sums(n, deg[eligible], tri[eligible])
        fields["cc_count"] += np.bincount(deg[eligible], minlength=n)
        fields["cc_sum"] += s
        fields["cc_sumsq"] += ss

        fields["vertex_degree_sum"] += deg
        fields["vertex_degree_sumsq"] += deg * deg
        fields["vertex_triangle_sum"] += tri
        fields["vertex_triangle_sumsq"] += tri.astype(dtype) * tri

        r = assortativity_from_stats(stats)
        r_vals[i] = np.nan if r is None else r
        cc = clustering_values(stats)
        cc = cc[~np.isnan(cc)]
        c_vals[i] = math.fsum(cc) / cc.size if cc.size else np.nan
    clamp = ClampReport(
        report.clamped_low * count, report.clamped_high * count, report.total_pairs * count
    )
    fields = {name: value.astype(object) for name, value in fields.items()}
    return replace(
        acc,
        ranges=((start, stop),) if count else (),
        realization_index=np.arange(start, stop, dtype=np.int64),
        r_values=r_vals,
        clustering_values=c_vals,
        edge_counts=edges,
        clamp_totals=clamp,
        **fields,
    )


def run_ensemble(
    seq: DegreeSequence,
    kernel: Kernel,
    r_count: int,
    master_seed: int,
    workers: int = 1,
    start: int = 0,
    backend: str | None = None,
) -> EnsembleSummary:
    """Generate realizations ``start .. start + r_count - 1`` and aggregate them.

    Realization t uses the seed derived from (master_seed, t). The result
    is identical for every ``workers`` value.
    """
    if r_count < 0:
        raise InvalidParams(f"realization count must be >= 0, got {r_count}")
    if workers < 1:
        raise InvalidParams(f"workers must be >= 1, got {workers}")
    master_seed = check_seed(master_seed)
    report = _checked_report(seq, kernel)
    if r_count == 0:
        return EnsembleSummary.empty(seq, kernel, master_seed)
    bounds = list(range(start, start + r_count, _CHUNK)) + [start + r_count]
    chunks = list(zip(bounds[:-1], bounds[1:]))

    def work(chunk):
        return _run_range(seq, kernel, master_seed, chunk[0], chunk[1], report, backend)

    if workers == 1 or len(chunks) == 1:
        parts = [work(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, chunks))
    return _merge_all(parts)


def _same_lineage(a: EnsembleSummary, b: EnsembleSummary) -> bool:
    return a.master_seed == b.master_seed and a.kernel == b.kernel and a.seq.same_as(b.seq)


def _merge_ranges(ranges) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    for lo, hi in sorted(ranges):
        if out and out[-1][1] == lo:
            out[-1][1] = hi
        else:
            out.append([lo, hi])
    return tuple((lo, hi) for lo, hi in out)


def merge_summaries(a: EnsembleSummary, b: EnsembleSummary) -> EnsembleSummary:
    """Pool two summaries over disjoint realization ranges of the same lineage."""
    return _merge_all([a, b])


def _merge_all(parts: list[EnsembleSummary]) -> EnsembleSummary:
    first = parts[0]
    for other in parts[1:]:
        if not _same_lineage(first, other):
            raise IncompatibleSummaries("summaries differ in sequence, kernel or master seed")
    index = np.concatenate([x.realization_index for x in parts])
    if np.unique(index).size != index.size:
        raise IncompatibleSummaries("realization ranges overlap")
    order = np.argsort(index, kind="stable")

    def cat(name):
        return np.concatenate([getattr(x, name) for x in parts])[order]

    summed = {name: sum((getattr(x, name) for x in parts[1:]), getattr(first, name)) for name in _SUMMED}
    clamp = ClampReport()
    for x in parts:
        clamp = clamp + x.clamp_totals
    return replace(
        first,
        ranges=_merge_ranges(sum((x.ranges for x in parts), ())),
        realization_index=index[order],
        r_values=cat("r_values"),
        clustering_values=cat("clustering_values"),
        edge_counts=cat("edge_counts"),
        clamp_totals=clamp,
        **summed,
    )


class FitResult(NamedTuple):
    slope: float
    intercept: float
    r_squared: float
    points: int


def _ols(x: np.ndarray, y: np.ndarray) -> FitResult:
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return FitResult(float(slope), float(intercept), r2, int(x.size))


def fit_power_slope(spectrum: DegreeSpectrum, offset: float, min_count: int = 30) -> FitResult:
    """Least-squares slope of log(mean - offset) against log(degree)."""
    resid = spectrum.mean - offset
    ok = (spectrum.count >= min_count) & (resid > 0) & (spectrum.degree > 0)
    if np.count_nonzero(ok) < 3:
        raise InsufficientData(
            f"need >= 3 bins with count >= {min_count} and mean above {offset}, "
            f"found {int(np.count_nonzero(ok))}"
        )
    return _ols(np.log(spectrum.degree[ok].astype(float)), np.log(resid[ok]))


def fit_linear(x_spectrum: DegreeSpectrum, y_spectrum: DegreeSpectrum, min_count: int = 30) -> FitResult:
    """Least-squares line through (x mean, y mean) points matched on degree."""
    xs = {d: (m, c) for d, m, _, c in x_spectrum.rows if c >= min_count}
    ys = {d: (m, c) for d, m, _, c in y_spectrum.rows if c >= min_count}
    common = sorted(set(xs) & set(ys))
    if len(common) < 3:
        raise InsufficientData(f"need >= 3 shared degrees with count >= {min_count}, found {len(common)}")
    x = np.array([xs[d][0] for d in common])
    y = np.array([ys[d][0] for d in common])
    return _ols(x, y)
