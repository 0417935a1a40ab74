import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import addgraph as ag
from addgraph.kernel import extreme_pairs, probability_matrix

from conftest import EXAMPLE_SEQ, additive_fraction


def test_additive_pair_prob_examples():
    k = ag.Additive(z=4, n=1000)
    assert k.raw(4, 4) == pytest.approx(0.004, abs=1e-18)
    assert ag.pair_prob(k, 4, 4) == (0.004, False)
    assert ag.pair_prob(k, 1, 3) == (0.0, False)


def test_strict_and_clamp_modes():
    strict = ag.Additive(z=8, n=1000)
    with pytest.raises(ag.InfeasiblePair):
        ag.pair_prob(strict, 2, 2)
    clamp = ag.Additive(z=8, n=1000, clamp_policy="clamp")
    assert ag.pair_prob(clamp, 2, 2) == (0.0, True)
    high = ag.Additive(z=1, n=2, clamp_policy="clamp")
    assert ag.pair_prob(high, 5, 5) == (1.0, True)


def test_chung_lu_pair_prob():
    seq = ag.from_list(EXAMPLE_SEQ)
    k = ag.kernel_for_sequence("chung-lu", seq)
    assert k == ag.ChungLu(two_m=32)
    assert ag.pair_prob(k, 2, 7) == (0.4375, False)


def test_kernel_for_sequence():
    seq = ag.from_list(EXAMPLE_SEQ)
    assert ag.kernel_for_sequence("additive", seq) == ag.Additive(z=4, n=8)
    assert ag.kernel_for_sequence("chung-lu", seq) == ag.ChungLu(two_m=32)
    assert ag.kernel_for_sequence("constant", seq) == ag.Constant(p=0.5)
    with pytest.raises(ag.InvalidParams):
        ag.kernel_for_sequence("gaussian", seq)


@pytest.mark.parametrize(
    "make",
    [lambda: ag.Additive(z=0, n=10), lambda: ag.Additive(z=2, n=1), lambda: ag.ChungLu(two_m=0),
     lambda: ag.Constant(p=1.5), lambda: ag.Constant(p=-0.1)],
)
def test_kernel_invariants(make):
    with pytest.raises(ag.InvalidParams):
        make()


def test_validate_example_sequence_exhaustive():
    seq = ag.from_list(EXAMPLE_SEQ)
    kernel = ag.kernel_for_sequence("additive", seq)
    # 28-pair oracle in exact rationals
    probs = [additive_fraction(EXAMPLE_SEQ[i], EXAMPLE_SEQ[j], EXAMPLE_SEQ)
             for i, j in itertools.combinations(range(8), 2)]
    assert len(probs) == 28
    assert min(probs) == 0.125 and max(probs) == 1
    assert all(0 <= p <= 1 for p in probs)
    report = ag.validate_feasibility(kernel, seq)
    assert report == ag.ClampReport(0, 0, 28)
    assert ag.validate_feasibility(kernel, seq, full=True) == report
    assert extreme_pairs(kernel, seq) == (0.125, 1.0)


def test_validate_regular():
    seq = ag.regular_sequence(100, 4)
    kernel = ag.kernel_for_sequence("additive", seq)
    assert ag.validate_feasibility(kernel, seq).clean
    p = probability_matrix(kernel, seq)
    off = p[~np.eye(100, dtype=bool)]
    assert np.all(off == 0.04)


def test_validate_detects_low_clamps():
    seq = ag.from_list([1, 1, 1, 15, 15, 15])
    kernel = ag.kernel_for_sequence("additive", seq)
    assert kernel.z == 8
    report = ag.validate_feasibility(kernel, seq)
    assert report.clamped_low == 3
    assert report == ag.validate_feasibility(kernel, seq, full=True)


def test_validate_parameter_mismatch():
    seq = ag.from_list(EXAMPLE_SEQ)
    with pytest.raises(ag.ParameterMismatch):
        ag.validate_feasibility(ag.Additive(z=5, n=8), seq)
    with pytest.raises(ag.ParameterMismatch):
        ag.validate_feasibility(ag.Additive(z=4, n=9), seq)


def test_probability_matrix_strict_raises():
    seq = ag.from_list([1, 1, 1, 15, 15, 15])
    with pytest.raises(ag.InfeasiblePair):
        probability_matrix(ag.kernel_for_sequence("additive", seq), seq)
    p = probability_matrix(ag.kernel_for_sequence("additive", seq, "clamp"), seq)
    assert p.min() == 0.0 and p.max() <= 1.0


degree_lists = st.lists(st.integers(1, 60), min_size=2, max_size=40)


@settings(max_examples=80, deadline=None)
@given(degree_lists)
def test_class_census_matches_full_census(degrees):
    seq = ag.from_list(degrees)
    for name in ("additive", "chung-lu", "constant"):
        if name == "constant" and seq.p > 1:
            with pytest.raises(ag.InvalidParams):
                ag.kernel_for_sequence(name, seq, "clamp")
            continue
        kernel = ag.kernel_for_sequence(name, seq, "clamp")
        assert ag.validate_feasibility(kernel, seq) == ag.validate_feasibility(kernel, seq, full=True)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 80), st.integers(1, 80), st.floats(0.5, 50), st.integers(2, 500))
def test_symmetry_and_clamp_range(ki, kj, z, n):
    for kernel in (ag.Additive(z=z, n=n, clamp_policy="clamp"), ag.ChungLu(two_m=z * n, clamp_policy="clamp"),
                   ag.Constant(p=min(1.0, z / n), clamp_policy="clamp")):
        p, flag = ag.pair_prob(kernel, ki, kj)
        assert (p, flag) == ag.pair_prob(kernel, kj, ki)
        assert 0.0 <= p <= 1.0
        strict = type(kernel)(**kernel.params())
        try:
            q, sflag = ag.pair_prob(strict, ki, kj)
        except ag.InfeasiblePair:
            assert flag
        else:
            assert not sflag and q == p


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(3, 12), min_size=4, max_size=30))
def test_additive_row_sum_identity(degrees):
    seq = ag.from_list(degrees)
    kernel = ag.kernel_for_sequence("additive", seq)
    if not ag.validate_feasibility(kernel, seq).clean:
        return
    k = seq.degrees.astype(float)
    for i in range(seq.n):
        full_row = [kernel.raw(k[i], k[j]) for j in range(seq.n)]  # includes j = i
        assert math.fsum(full_row) == pytest.approx(k[i], rel=1e-12)
        off_diag = math.fsum(full_row) - kernel.raw(k[i], k[i])
        assert off_diag == pytest.approx(k[i] - (2 * k[i] - seq.z) / seq.n, rel=1e-12)


def test_additive_equals_constant_on_regular():
    seq = ag.regular_sequence(50, 6)
    add = probability_matrix(ag.kernel_for_sequence("additive", seq), seq)
    const = probability_matrix(ag.kernel_for_sequence("constant", seq), seq)
    assert np.array_equal(add, const)
