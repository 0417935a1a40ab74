"""numpy/scipy implementations of the hot kernels.

Used when the compiled core is not built, or when ``ADDGRAPH_BACKEND=python``.
Results are bit-identical to ``_core``.
"""

import numpy as np
import scipy.sparse as sp

from .rng import uniforms_from_keys

NAME = "python"

# pairs handled per vectorized block
_BLOCK_PAIRS = 1 << 20


def _probabilities(kind, a, b, ki, kj):
    if kind == 0:
        return (ki + kj - a) / b
    if kind == 1:
        return ki * kj / a
    return np.full(kj.shape, a)


def draw_edges(degrees, kind, a, b, key_a, key_b):
    """Sweep every pair i < j and keep it with its (clamped) kernel probability.

    Returns row-major sorted endpoint arrays ``(u, v)`` with ``u < v``.
    """
    k = np.asarray(degrees, dtype=np.float64)
    n = k.size
    us, vs = [], []
    i = 0
    while i < n - 1:
        # gather whole rows until the block is full
        rows = [i]
        size = n - 1 - i
        i += 1
        while i < n - 1 and size + (n - 1 - i) <= _BLOCK_PAIRS:
            rows.append(i)
            size += n - 1 - i
            i += 1
        lengths = np.array([n - 1 - r for r in rows], dtype=np.int64)
        ii = np.repeat(np.array(rows, dtype=np.int64), lengths)
        starts = np.cumsum(lengths) - lengths
        jj = np.arange(size, dtype=np.int64) - np.repeat(starts, lengths) + ii + 1
        p = _probabilities(kind, a, b, k[ii], k[jj])
        p = np.minimum(np.maximum(p, 0.0), 1.0)
        u = uniforms_from_keys(key_a, key_b, (ii * n + jj).astype(np.uint64))
        keep = u < p
        us.append(ii[keep])
        vs.append(jj[keep])
    if not us:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    return np.concatenate(us), np.concatenate(vs)


def vertex_stats(n, u, v):
    """Degree, neighbor-degree sum and triangle count of every vertex."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    ones = np.ones(u.size, dtype=np.int64)
    upper = sp.csr_matrix((ones, (u, v)), shape=(n, n), dtype=np.int64)
    adj = (upper + upper.T).tocsr()
    deg = np.asarray(adj.sum(axis=1)).ravel().astype(np.int64)
    nbr_sum = adj @ deg
    paths = adj @ adj
    tri = np.asarray(paths.multiply(adj).sum(axis=1)).ravel().astype(np.int64) // 2
    return deg, np.asarray(nbr_sum, dtype=np.int64), tri
