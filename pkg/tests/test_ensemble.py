import numpy as np
import pytest

import addgraph as ag
from addgraph.ensemble import DegreeSpectrum, _SUMMED

from conftest import EXAMPLE_SEQ


def assert_same(a, b):
    for name in _SUMMED:
        assert np.array_equal(getattr(a, name), getattr(b, name)), name
    for name in ("realization_index", "edge_counts"):
        assert np.array_equal(getattr(a, name), getattr(b, name)), name
    for name in ("r_values", "clustering_values"):
        assert np.array_equal(getattr(a, name), getattr(b, name), equal_nan=True), name
    assert a.ranges == b.ranges
    assert a.clamp_totals == b.clamp_totals
    assert a.knn_spectrum.equals(b.knn_spectrum)
    assert a.clustering_spectrum.equals(b.clustering_spectrum)
    assert a.mean_r == b.mean_r
    assert a.mean_clustering == b.mean_clustering
    assert a.mean_edge_count == b.mean_edge_count


@pytest.fixture(scope="module")
def powerlaw():
    seq = ag.sample_power_law(200, ag.PowerLawParams(2.5, 3, 30), seed=4)
    return seq, ag.kernel_for_sequence("additive", seq, "clamp")


def test_complete_graph_single_realization():
    seq = ag.regular_sequence(4, 3)
    s = ag.run_ensemble(seq, ag.Constant(p=1.0), 1, master_seed=0)
    assert s.knn_spectrum.rows == [(3, 3.0, 0.0, 4)]
    assert s.clustering_spectrum.rows == [(3, 1.0, 0.0, 4)]
    assert s.degree_histogram == {3: 4}
    assert s.mean_r == (None, None)
    assert s.mean_clustering == (1.0, 0.0)


def test_regular_baseline_knn_and_clustering():
    seq = ag.regular_sequence(100, 4)
    s = ag.run_ensemble(seq, ag.kernel_for_sequence("additive", seq), 500, master_seed=1)
    # independent edges: a neighbour's realized degree is 1 + Binomial(N - 2, p)
    # whatever the focal vertex's degree
    knn_exact = 1 + (seq.n - 2) * seq.p
    checked = 0
    for d, mean, err, count in s.knn_spectrum.rows:
        if count >= 30:
            assert abs(mean - knn_exact) < 3 * err, d
            checked += 1
    assert checked >= 5
    checked = 0
    for d, mean, err, count in s.clustering_spectrum.rows:
        if count >= 30:
            assert abs(mean - seq.p) < 3 * err, d
            checked += 1
    assert checked >= 4


def test_mean_edge_count_matches_expected_total(example_seq, example_seq_ensemble):
    target = ag.expected_edge_total(example_seq, ag.kernel_for_sequence("additive", example_seq))
    mean, err = example_seq_ensemble.mean_edge_count
    assert abs(mean - target) < 3 * err


def test_worker_invariance(powerlaw):
    seq, kernel = powerlaw
    base = ag.run_ensemble(seq, kernel, 70, master_seed=5, workers=1)
    for w in (2, 8):
        assert_same(base, ag.run_ensemble(seq, kernel, 70, master_seed=5, workers=w))


def test_backend_invariance(powerlaw):
    if "compiled" not in ag._backend.available():
        pytest.skip("compiled core not built")
    seq, kernel = powerlaw
    assert_same(
        ag.run_ensemble(seq, kernel, 20, master_seed=5, backend="compiled"),
        ag.run_ensemble(seq, kernel, 20, master_seed=5, backend="python"),
    )


def test_merge_equals_single_run(powerlaw):
    seq, kernel = powerlaw
    a = ag.run_ensemble(seq, kernel, 50, master_seed=9)
    b = ag.run_ensemble(seq, kernel, 50, master_seed=9, start=50)
    whole = ag.run_ensemble(seq, kernel, 100, master_seed=9)
    assert_same(ag.merge_summaries(a, b), whole)
    assert_same(ag.merge_summaries(b, a), whole)
    assert whole.ranges == ((0, 100),)


def test_merge_associative_and_identity(powerlaw):
    seq, kernel = powerlaw
    x, y, z = (ag.run_ensemble(seq, kernel, 7, master_seed=2, start=s) for s in (0, 7, 30))
    left = ag.merge_summaries(ag.merge_summaries(x, y), z)
    right = ag.merge_summaries(x, ag.merge_summaries(y, z))
    assert_same(left, right)
    assert left.ranges == ((0, 14), (30, 37))
    empty = ag.EnsembleSummary.empty(seq, kernel, 2)
    assert_same(ag.merge_summaries(x, empty), x)
    assert_same(ag.merge_summaries(empty, x), x)
    assert_same(ag.run_ensemble(seq, kernel, 0, master_seed=2), empty)


def test_merge_rejects_incompatible(powerlaw):
    seq, kernel = powerlaw
    a = ag.run_ensemble(seq, kernel, 5, master_seed=1)
    other_kernel = ag.run_ensemble(seq, ag.kernel_for_sequence("chung-lu", seq, "clamp"), 5, master_seed=1, start=5)
    with pytest.raises(ag.IncompatibleSummaries):
        ag.merge_summaries(a, other_kernel)
    with pytest.raises(ag.IncompatibleSummaries):
        ag.merge_summaries(a, ag.run_ensemble(seq, kernel, 5, master_seed=2, start=5))
    with pytest.raises(ag.IncompatibleSummaries):
        ag.merge_summaries(a, ag.run_ensemble(seq, kernel, 5, master_seed=1, start=3))


def test_spectrum_invariants(powerlaw):
    seq, kernel = powerlaw
    s = ag.run_ensemble(seq, kernel, 40, master_seed=3)
    hist = s.degree_histogram
    assert sum(hist.values()) == 40 * seq.n
    assert s.knn_spectrum.count.sum() == 40 * seq.n - hist.get(0, 0)
    assert s.clustering_spectrum.count.sum() == 40 * seq.n - hist.get(0, 0) - hist.get(1, 0)
    for spec in (s.knn_spectrum, s.clustering_spectrum):
        assert np.all(np.diff(spec.degree) > 0)
        assert np.all(spec.count >= 1)
        assert np.all(spec.stderr >= 0)
        assert np.all(spec.stderr[spec.count == 1] == 0)
    assert np.all((s.clustering_spectrum.mean >= 0) & (s.clustering_spectrum.mean <= 1))
    assert s.clamp_totals.clamped_low == 40 * ag.validate_feasibility(kernel, seq).clamped_low


def test_spectrum_stderr_matches_direct_computation():
    seq = ag.from_list(EXAMPLE_SEQ)
    kernel = ag.kernel_for_sequence("additive", seq)
    s = ag.run_ensemble(seq, kernel, 60, master_seed=8)
    pools = {}
    for t in range(60):
        g, _ = ag.generate(seq, kernel, ag.rng.realization_seed(8, t))
        for v in ag.vertex_metrics(g):
            if v.knn is not None:
                pools.setdefault(v.degree, []).append(v.knn)
    for d, mean, err, count in s.knn_spectrum.rows:
        vals = np.array(pools[d])
        assert count == vals.size
        assert mean == pytest.approx(vals.mean(), rel=1e-12)
        want = vals.std(ddof=1) / np.sqrt(vals.size) if vals.size > 1 else 0.0
        assert err == pytest.approx(want, rel=1e-9, abs=1e-15)


def test_strict_infeasible_ensemble_raises():
    seq = ag.from_list([1, 1, 1, 15, 15, 15])
    with pytest.raises(ag.InfeasiblePair):
        ag.run_ensemble(seq, ag.kernel_for_sequence("additive", seq), 3, master_seed=0)


def synthetic(degrees, means, count=100):
    return DegreeSpectrum.from_rows([(d, m, 0.0, count) for d, m in zip(degrees, means)])


def test_fit_power_slope_exact_law():
    z, q = 4.0, 2.5
    ks = np.arange(1, 30)
    fit = ag.fit_power_slope(synthetic(ks, z + q / ks), offset=z)
    assert fit.slope == pytest.approx(-1.0, abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert np.exp(fit.intercept) == pytest.approx(q, rel=1e-9)


def test_fit_power_slope_insufficient():
    ks = np.arange(1, 30)
    with pytest.raises(ag.InsufficientData):
        ag.fit_power_slope(synthetic(ks, np.full(ks.size, 4.0)), offset=4.0)
    with pytest.raises(ag.InsufficientData):
        ag.fit_power_slope(synthetic(ks, 4 + 1 / ks, count=10), offset=4.0, min_count=30)


def test_fit_linear_exact_law():
    n, p = 1000, 0.004
    ks = np.arange(2, 40)
    knn = 4 + 9.0 / ks
    c = 2 / n * knn - p
    fit = ag.fit_linear(synthetic(ks, knn), synthetic(ks, c))
    assert fit.slope == pytest.approx(0.002, rel=1e-9)
    assert fit.intercept == pytest.approx(-0.004, rel=1e-9)


def test_fit_linear_disjoint_supports():
    with pytest.raises(ag.InsufficientData):
        ag.fit_linear(synthetic([1, 2, 3], [1, 2, 3]), synthetic([4, 5, 6], [1, 2, 3]))
