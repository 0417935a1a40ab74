import itertools
from fractions import Fraction

import numpy as np
import pytest

import addgraph as ag

EXAMPLE_SEQ = [2, 3, 3, 4, 4, 4, 5, 7]
SMALL_SEQ = [2, 2, 3, 3]


def additive_fraction(k_i, k_j, degrees):
    """Exact rational (k_i + k_j - z) / N, independent of the float kernel."""
    n = len(degrees)
    z = Fraction(sum(degrees), n)
    return (k_i + k_j - z) / n


def enumerate_graphs(degrees):
    """Yield (weight, adjacency) for every simple graph on len(degrees) vertices.

    Weights are exact rationals under independent additive-kernel edges.
    """
    n = len(degrees)
    pairs = list(itertools.combinations(range(n), 2))
    probs = [additive_fraction(degrees[i], degrees[j], degrees) for i, j in pairs]
    for mask in itertools.product((0, 1), repeat=len(pairs)):
        w = Fraction(1)
        adj = np.zeros((n, n), dtype=int)
        for (i, j), p, a in zip(pairs, probs, mask):
            w *= p if a else 1 - p
            if a:
                adj[i, j] = adj[j, i] = 1
        yield w, adj


def enumeration_expectations(degrees):
    """Exact E[degree_i] and E[triangles at i] by summing over all graphs."""
    n = len(degrees)
    e_deg = [Fraction(0)] * n
    e_tri = [Fraction(0)] * n
    for w, adj in enumerate_graphs(degrees):
        deg = adj.sum(axis=1)
        tri = np.diag(adj @ adj @ adj) // 2
        for i in range(n):
            e_deg[i] += w * int(deg[i])
            e_tri[i] += w * int(tri[i])
    return e_deg, e_tri


@pytest.fixture(scope="session")
def example_seq():
    return ag.from_list(EXAMPLE_SEQ)


@pytest.fixture(scope="session")
def small_seq():
    return ag.from_list(SMALL_SEQ)


@pytest.fixture(scope="session")
def example_seq_ensemble(example_seq):
    kernel = ag.kernel_for_sequence("additive", example_seq)
    return ag.run_ensemble(example_seq, kernel, 100_000, master_seed=7)


@pytest.fixture(scope="session")
def small_seq_ensemble(small_seq):
    kernel = ag.kernel_for_sequence("additive", small_seq)
    return ag.run_ensemble(small_seq, kernel, 100_000, master_seed=11)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
