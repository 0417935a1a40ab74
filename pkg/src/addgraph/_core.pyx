# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled pair sweep and per-vertex statistics.

Mirrors ``_fallback`` operation for operation. Both loops release the GIL
so ensemble workers can run them on threads.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

NAME = "compiled"

cdef uint64_t _M1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t _M2 = 0x94D049BB133111EBULL
cdef double _INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t mix64(uint64_t x) noexcept nogil:
    x = (x ^ (x >> 30)) * _M1
    x = (x ^ (x >> 27)) * _M2
    return x ^ (x >> 31)


cdef inline double kernel_prob(int kind, double a, double b, double ki, double kj) noexcept nogil:
    cdef double p
    if kind == 0:
        p = (ki + kj - a) / b
    elif kind == 1:
        p = ki * kj / a
    else:
        p = a
    if p < 0.0:
        p = 0.0
    elif p > 1.0:
        p = 1.0
    return p


cdef Py_ssize_t _sweep(const double[::1] k, int kind, double a, double b,
                       uint64_t key_a, uint64_t key_b,
                       int64_t[::1] us, int64_t[::1] vs) noexcept nogil:
    # returns the edge count, or -(count + 1) when the buffers overflow
    cdef Py_ssize_t n = k.shape[0]
    cdef Py_ssize_t cap = us.shape[0]
    cdef Py_ssize_t i, j, m = 0
    cdef double ki, p, u
    cdef uint64_t h, kappa
    for i in range(n - 1):
        ki = k[i]
        for j in range(i + 1, n):
            p = kernel_prob(kind, a, b, ki, k[j])
            if p <= 0.0:
                continue
            kappa = <uint64_t>(i * n + j)
            h = mix64(mix64(kappa + key_a) ^ key_b)
            u = <double>(h >> 11) * _INV_2_53
            if u < p:
                if m >= cap:
                    return -(m + 1)
                us[m] = i
                vs[m] = j
                m += 1
    return m


def draw_edges(degrees, int kind, double a, double b, key_a, key_b):
    cdef const double[::1] k = np.ascontiguousarray(degrees, dtype=np.float64)
    cdef uint64_t ka = <uint64_t>int(key_a)
    cdef uint64_t kb = <uint64_t>int(key_b)
    cdef Py_ssize_t n = k.shape[0]
    cdef Py_ssize_t total = n * (n - 1) // 2
    cdef Py_ssize_t cap = 1024
    cdef Py_ssize_t m
    cdef int64_t[::1] us_v
    cdef int64_t[::1] vs_v
    if n < 2:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    # first guess from the expected edge count; retry with the exact bound
    cap = max(cap, min(total, 2 * int(np.sum(k)) + 1024))
    while True:
        us = np.empty(cap, dtype=np.int64)
        vs = np.empty(cap, dtype=np.int64)
        us_v = us
        vs_v = vs
        with nogil:
            m = _sweep(k, kind, a, b, ka, kb, us_v, vs_v)
        if m >= 0:
            return us[:m].copy(), vs[:m].copy()
        cap = total


def vertex_stats(Py_ssize_t n, u, v):
    """Degree, neighbor-degree sum and triangle count of every vertex.

    Edges must be sorted lexicographically with u < v.
    """
    cdef const int64_t[::1] eu = np.ascontiguousarray(u, dtype=np.int64)
    cdef const int64_t[::1] ev = np.ascontiguousarray(v, dtype=np.int64)
    cdef Py_ssize_t m = eu.shape[0]
    deg_a = np.zeros(n, dtype=np.int64)
    nbr_a = np.zeros(n, dtype=np.int64)
    tri_a = np.zeros(n, dtype=np.int64)
    indptr_a = np.zeros(n + 1, dtype=np.int64)
    indices_a = np.empty(2 * m, dtype=np.int64)
    fill_a = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] deg = deg_a
    cdef int64_t[::1] nbr = nbr_a
    cdef int64_t[::1] tri = tri_a
    cdef int64_t[::1] indptr = indptr_a
    cdef int64_t[::1] indices = indices_a
    cdef int64_t[::1] fill = fill_a
    cdef Py_ssize_t e, x, y, pa, pb, ea, eb, w, c
    with nogil:
        for e in range(m):
            deg[eu[e]] += 1
            deg[ev[e]] += 1
        for x in range(n):
            indptr[x + 1] = indptr[x] + deg[x]
            fill[x] = indptr[x]
        # lexicographic edge order leaves every neighbor list sorted
        for e in range(m):
            x = eu[e]
            y = ev[e]
            indices[fill[y]] = x
            fill[y] += 1
        for e in range(m):
            x = eu[e]
            y = ev[e]
            indices[fill[x]] = y
            fill[x] += 1
            nbr[x] += deg[y]
            nbr[y] += deg[x]
        # each triangle x < y < w is found once, from its edge (x, y)
        for e in range(m):
            x = eu[e]
            y = ev[e]
            pa = indptr[x]
            ea = indptr[x + 1]
            pb = indptr[y]
            eb = indptr[y + 1]
            while pa < ea and indices[pa] <= y:
                pa += 1
            while pb < eb and indices[pb] <= y:
                pb += 1
            c = 0
            while pa < ea and pb < eb:
                if indices[pa] < indices[pb]:
                    pa += 1
                elif indices[pa] > indices[pb]:
                    pb += 1
                else:
                    w = indices[pa]
                    tri[w] += 1
                    c += 1
                    pa += 1
                    pb += 1
            tri[x] += c
            tri[y] += c
    return deg_a, nbr_a, tri_a
