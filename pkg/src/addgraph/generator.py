"""One simple undirected realization from a degree sequence and a kernel."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _backend
from .degseq import DegreeSequence
from .errors import InfeasiblePair, InvalidParams, SequenceParseError
from .kernel import ClampPolicy, ClampReport, Kernel, validate_feasibility
from .rng import stream_keys

__all__ = ["Graph", "generate", "expected_edge_total", "read_edgelist", "write_edgelist"]


@dataclass(frozen=True, eq=False)
class Graph:
    """A simple undirected graph on vertices 0..n-1.

    ``edges`` is an (E, 2) array with u < v in each row, sorted
    lexicographically. Neighbor lists are derived lazily in CSR form.
    """

    n: int
    edges: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if self.n < 0:
            raise InvalidParams("vertex count must be non-negative")
        if e.size:
            if e.min() < 0 or e.max() >= self.n:
                raise InvalidParams("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise InvalidParams("self-loops are not allowed")
            e = np.sort(e, axis=1)
            e = e[np.lexsort((e[:, 1], e[:, 0]))]
            if np.any(np.all(e[1:] == e[:-1], axis=1)):
                raise InvalidParams("multi-edges are not allowed")
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    @classmethod
    def from_sorted_arrays(cls, n: int, u: np.ndarray, v: np.ndarray) -> "Graph":
        # trusted path for generator output: already canonical
        g = object.__new__(cls)
        e = np.column_stack([u, v]).astype(np.int64, copy=False).reshape(-1, 2)
        e.setflags(write=False)
        object.__setattr__(g, "n", int(n))
        object.__setattr__(g, "edges", e)
        return g

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        return cls(int(n), np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges))

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def _csr(self) -> tuple[np.ndarray, np.ndarray]:
        u, v = self.edges[:, 0], self.edges[:, 1]
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.n), out=indptr[1:])
        return indptr, dst[order]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self._csr[0])

    def neighbors(self, i: int) -> np.ndarray:
        indptr, indices = self._csr
        return indices[indptr[i] : indptr[i + 1]]

    @property
    def adjacency(self) -> list[np.ndarray]:
        return [self.neighbors(i) for i in range(self.n)]

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors(i)
        pos = np.searchsorted(nb, j)
        return bool(pos < nb.size and nb[pos] == j)

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        a[self.edges[:, 0], self.edges[:, 1]] = 1
        a[self.edges[:, 1], self.edges[:, 0]] = 1
        return a

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edge_count={self.edge_count})"


def _checked_report(seq: DegreeSequence, kernel: Kernel) -> ClampReport:
    report = validate_feasibility(kernel, seq)
    if kernel.clamp_policy is ClampPolicy.STRICT and not report.clean:
        raise InfeasiblePair(
            f"{kernel.name} kernel is infeasible for this sequence: "
            f"{report.clamped_low} pairs below 0, {report.clamped_high} above 1"
        )
    return report


def _draw(seq: DegreeSequence, kernel: Kernel, realization_seed: int, backend=None):
    kind, a, b = kernel.core_params
    key_a, key_b = stream_keys(realization_seed)
    impl = _backend.get(backend)
    return impl.draw_edges(seq.degrees.astype(np.float64), kind, a, b, key_a, key_b)


def generate(
    seq: DegreeSequence, kernel: Kernel, realization_seed: int, backend: str | None = None
) -> tuple[Graph, ClampReport]:
    """Sample one graph with an independent Bernoulli trial per vertex pair.

    The pair (i, j) uses the counter i*N + j of the stream keyed by
    ``realization_seed``, so the graph is identical across backends.
    """
    report = _checked_report(seq, kernel)
    u, v = _draw(seq, kernel, realization_seed, backend)
    return Graph.from_sorted_arrays(seq.n, u, v), report


def expected_edge_total(seq: DegreeSequence, kernel: Kernel) -> float:
    """Sum of p_ij over unordered pairs i < j, by an exact pair sweep."""
    _checked_report(seq, kernel)
    k = seq.degrees.astype(float)
    terms = []
    for i in range(seq.n - 1):
        p = np.asarray(kernel.raw(k[i], k[i + 1 :]), dtype=float)
        terms.append(np.clip(p, 0.0, 1.0))
    if not terms:
        return 0.0
    return math.fsum(np.concatenate(terms))


def write_edgelist(g: Graph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def read_edgelist(path: str | os.PathLike, n: int | None = None) -> Graph:
    """Read a "u v" per line file (0-indexed, u < v).

    ``n`` defaults to one more than the largest endpoint.
    """
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            parts = raw.split()
            if len(parts) != 2:
                raise SequenceParseError(f"expected 'u v', got {raw.strip()!r}", line=lineno, path=path)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise SequenceParseError(f"non-integer endpoint in {raw.strip()!r}", line=lineno, path=path) from None
            if u < 0 or v <= u:
                raise SequenceParseError(f"need 0 <= u < v, got {u} {v}", line=lineno, path=path)
            pairs.append((u, v))
    if n is None:
        n = max((v for _, v in pairs), default=-1) + 1
    return Graph(int(n), np.asarray(pairs, dtype=np.int64).reshape(-1, 2))
