import sys

import numpy as np
import pytest

from fsbench import (
    SelectorSpec,
    build_grid,
    built_in_selectors,
    get_selector,
    make_synthetic,
    random_baseline,
    rank_features,
    subprocess_selector,
    take_subset,
    variance_baseline,
)
from fsbench.selection import SelectionError


# ---------------------------------------------------------------------------
# ratio grids
# ---------------------------------------------------------------------------


def test_grid_10percent_200_features():
    grid = build_grid("10Percent", 200)
    assert [p.k for p in grid.points] == list(range(1, 21))
    assert [round(p.ratio, 4) for p in grid.points] == [round(0.005 * i, 4) for i in range(1, 21)]


def test_grid_10percent_10_features_collapses_to_one_point():
    grid = build_grid("10Percent", 10)
    assert len(grid.points) == 1
    assert grid.points[0].ratio == 0.005 and grid.points[0].k == 1


def test_grid_100percent_20_features():
    grid = build_grid("100Percent", 20)
    assert [p.k for p in grid.points] == list(range(1, 21))
    assert grid.points[-1].ratio == 1.0 and grid.points[-1].k == 20


def test_grid_round_half_up():
    # 5% of 50 features = 2.5 -> rounds up to 3
    grid = build_grid("100Percent", 50)
    assert grid.points[0] == (0.05, 3)


def test_grid_unknown_experiment():
    with pytest.raises(SelectionError, match="unknown experiment"):
        build_grid("50Percent", 10)


def test_grid_k_monotone_and_valid():
    rng = np.random.default_rng(0)
    for n in rng.integers(1, 3000, size=50):
        for exp in ("10Percent", "100Percent"):
            ks = [p.k for p in build_grid(exp, int(n)).points]
            ratios = [p.ratio for p in build_grid(exp, int(n)).points]
            assert all(1 <= k <= n for k in ks)
            assert all(b > a for a, b in zip(ks, ks[1:]))  # strictly increasing after dedup
            assert all(b > a for a, b in zip(ratios, ratios[1:]))


# ---------------------------------------------------------------------------
# ranking
# ---------------------------------------------------------------------------


def _dataset_with_column_variances():
    # variances 3, 1, 2 by scaling unit-variance columns
    rng = np.random.default_rng(5)
    base = rng.normal(size=(200, 3))
    base = (base - base.mean(0)) / base.std(0, ddof=1)
    X = base * np.sqrt([3.0, 1.0, 2.0])
    from fsbench import Dataset

    return Dataset(name="var", X=X, y=np.arange(200) % 2)


def test_variance_ranking_order():
    ds = _dataset_with_column_variances()
    ranking = rank_features(get_selector("Variance_Baseline"), ds, seed=0)
    assert ranking.order.tolist() == [0, 2, 1]


def test_tie_break_by_feature_index():
    spec = SelectorSpec(name="const", kind="unsupervised", stochastic=False, scorer=lambda X: np.full(X.shape[1], 0.5))
    ds = make_synthetic(10, 3, 1, 2, seed=0)
    ranking = rank_features(spec, ds, seed=0)
    assert ranking.order.tolist() == [0, 1, 2]


def test_rank_features_deterministic_for_stochastic_selector():
    ds = make_synthetic(20, 8, 2, 2, seed=0)
    spec = get_selector("Random")
    a = rank_features(spec, ds, seed=42)
    b = rank_features(spec, ds, seed=42)
    assert a.order.tolist() == b.order.tolist()
    c = rank_features(spec, ds, seed=43)
    assert a.order.tolist() != c.order.tolist()  # astronomically unlikely to match


def test_rank_features_rejects_wrong_length():
    spec = SelectorSpec(name="bad", kind="unsupervised", stochastic=False, scorer=lambda X: np.ones(X.shape[1] + 1))
    ds = make_synthetic(10, 3, 1, 2, seed=0)
    with pytest.raises(SelectionError, match="scores"):
        rank_features(spec, ds, seed=0)


def test_rank_features_rejects_non_finite_scores():
    spec = SelectorSpec(name="bad", kind="unsupervised", stochastic=False, scorer=lambda X: np.array([1.0, np.nan, 0.0]))
    ds = make_synthetic(10, 3, 1, 2, seed=0)
    with pytest.raises(SelectionError, match="non-finite"):
        rank_features(spec, ds, seed=0)


def test_supervised_selector_receives_labels():
    seen = {}

    def scorer(X, y):
        seen["y"] = y.copy()
        return np.arange(X.shape[1], dtype=float)

    spec = SelectorSpec(name="sup", kind="supervised", stochastic=False, scorer=scorer)
    ds = make_synthetic(10, 3, 1, 2, seed=0)
    rank_features(spec, ds, seed=0)
    np.testing.assert_array_equal(seen["y"], ds.y)


# ---------------------------------------------------------------------------
# baselines
# ---------------------------------------------------------------------------


def test_random_baseline_reproducible_and_in_range():
    X = np.zeros((5, 7))
    a = random_baseline(X, seed=42)
    b = random_baseline(X, seed=42)
    np.testing.assert_array_equal(a, b)
    assert np.all((a >= 0) & (a < 1))


def test_random_baseline_rank1_uniform_over_seeds():
    X = np.zeros((3, 4))
    top = np.array([int(np.argmax(random_baseline(X, seed=s))) for s in range(1000)])
    freqs = np.bincount(top, minlength=4) / 1000
    assert np.all(np.abs(freqs - 0.25) <= 0.03)


def test_variance_baseline_two_point_columns():
    X = np.array([[1.0, 1.0], [0.0, 2.0]])
    np.testing.assert_allclose(variance_baseline(X), [0.5, 0.5])


def test_variance_baseline_constant_column_ranks_last():
    rng = np.random.default_rng(2)
    X = np.column_stack([rng.normal(size=30), np.full(30, 7.0), rng.normal(size=30)])
    scores = variance_baseline(X)
    assert scores[1] == 0.0
    assert np.argsort(-scores, kind="stable")[-1] == 1


def test_variance_baseline_prefers_informative_columns():
    ds = make_synthetic(400, 20, 4, 2, seed=9)
    scores = variance_baseline(ds.X)
    assert set(np.argsort(-scores)[:4]) == {0, 1, 2, 3}


# ---------------------------------------------------------------------------
# subsets
# ---------------------------------------------------------------------------


def test_take_subset_examples():
    ds = make_synthetic(10, 3, 1, 2, seed=0)
    spec = SelectorSpec(name="fixed", kind="unsupervised", stochastic=False, scorer=lambda X: np.array([1.0, 0.0, 2.0]))
    ranking = rank_features(spec, ds, seed=0)
    assert ranking.order.tolist() == [2, 0, 1]
    X_sub, idx = take_subset(ds, ranking, 2)
    assert idx.tolist() == [2, 0]
    np.testing.assert_array_equal(X_sub, ds.X[:, [2, 0]])
    X_all, _ = take_subset(ds, ranking, 3)
    assert X_all.shape == ds.X.shape
    X_one, _ = take_subset(ds, ranking, 1)
    np.testing.assert_array_equal(X_one[:, 0], ds.X[:, 2])


def test_take_subset_nested_property():
    ds = make_synthetic(30, 12, 3, 2, seed=2)
    ranking = rank_features(get_selector("Random"), ds, seed=5)
    for k in range(1, 12):
        _, idx_k = take_subset(ds, ranking, k)
        _, idx_k1 = take_subset(ds, ranking, k + 1)
        assert idx_k.tolist() == idx_k1[:-1].tolist()


def test_take_subset_k_out_of_range():
    ds = make_synthetic(10, 3, 1, 2, seed=0)
    ranking = rank_features(get_selector("Random"), ds, seed=0)
    with pytest.raises(SelectionError):
        take_subset(ds, ranking, 0)
    with pytest.raises(SelectionError):
        take_subset(ds, ranking, 4)


# ---------------------------------------------------------------------------
# registry and subprocess adapter
# ---------------------------------------------------------------------------


def test_registry_built_ins():
    registry = built_in_selectors()
    assert registry["Random"].stochastic is True
    assert registry["Variance_Baseline"].stochastic is False
    with pytest.raises(SelectionError, match="unknown selector"):
        get_selector("Foo")


SUBPROC_SCRIPT = """
import csv, statistics, sys
rows = list(csv.reader(sys.stdin))
data = [[float(x) for x in r[:-1]] for r in rows[1:]]
for col in zip(*data):
    print(statistics.variance(col))
"""


def test_subprocess_selector_matches_in_process_variance():
    ds = make_synthetic(40, 6, 2, 2, seed=3)
    external = subprocess_selector("ExtVar", [sys.executable, "-c", SUBPROC_SCRIPT])
    got = rank_features(external, ds, seed=0)
    want = rank_features(get_selector("Variance_Baseline"), ds, seed=0)
    assert got.order.tolist() == want.order.tolist()
    np.testing.assert_allclose(got.scores, want.scores, rtol=1e-12)


def test_subprocess_selector_failure_raises():
    bad = subprocess_selector("Bad", [sys.executable, "-c", "import sys; sys.exit(3)"])
    ds = make_synthetic(10, 3, 1, 2, seed=0)
    with pytest.raises(SelectionError, match="exited 3"):
        rank_features(bad, ds, seed=0)
