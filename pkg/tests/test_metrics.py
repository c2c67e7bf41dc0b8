import itertools
import math

import numpy as np
import pytest

from conftest import snn_consistency_k5
from fsbench import (
    CustomMetric,
    MetricError,
    aad,
    accuracy,
    auc,
    clustering_accuracy,
    eval_custom,
    make_synthetic,
    nmi,
    standardize,
)


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------


def clsacc_brute_force(y_true, clusters):
    """Maximize matches over every one-to-one cluster-to-class map."""
    y_true = np.asarray(y_true)
    clusters = np.asarray(clusters)
    cluster_ids = np.unique(clusters)
    class_ids = np.unique(y_true)
    size = max(len(cluster_ids), len(class_ids))
    table = np.zeros((size, size))
    for cl, cs in zip(clusters, y_true):
        table[np.where(cluster_ids == cl)[0][0], np.where(class_ids == cs)[0][0]] += 1
    best = max(
        sum(table[i, p[i]] for i in range(size)) for p in itertools.permutations(range(size))
    )
    return best / len(y_true)


def nmi_direct(y_true, clusters):
    """Contingency-entropy arithmetic with explicit loops."""
    y_true = list(y_true)
    clusters = list(clusters)
    n = len(y_true)
    pairs = {}
    for a, b in zip(y_true, clusters):
        pairs[(a, b)] = pairs.get((a, b), 0) + 1
    cnt_u = {}
    cnt_v = {}
    for a in y_true:
        cnt_u[a] = cnt_u.get(a, 0) + 1
    for b in clusters:
        cnt_v[b] = cnt_v.get(b, 0) + 1
    hu = -sum((c / n) * math.log(c / n) for c in cnt_u.values())
    hv = -sum((c / n) * math.log(c / n) for c in cnt_v.values())
    if hu <= 0 or hv <= 0:
        canon = lambda seq: [sorted(set(seq), key=seq.index).index(x) for x in seq]
        return 1.0 if canon(y_true) == canon(clusters) else 0.0
    info = sum(
        (nij / n) * math.log((nij / n) / ((cnt_u[a] / n) * (cnt_v[b] / n)))
        for (a, b), nij in pairs.items()
    )
    return info / math.sqrt(hu * hv)


def auc_pairwise(y_binary, scores):
    """Concordant-pair counting with ties worth 1/2."""
    pos = [s for s, t in zip(scores, y_binary) if t]
    neg = [s for s, t in zip(scores, y_binary) if not t]
    total = 0.0
    for p in pos:
        for q in neg:
            if p > q:
                total += 1.0
            elif p == q:
                total += 0.5
    return total / (len(pos) * len(neg))


# ---------------------------------------------------------------------------
# accuracy
# ---------------------------------------------------------------------------


def test_accuracy_basics():
    assert accuracy([0, 1, 1, 0], [0, 1, 1, 0]) == 1.0
    assert accuracy([0, 0], [1, 1]) == 0.0
    assert accuracy([0, 1, 1, 0], [0, 1, 0, 0]) == 0.75
    with pytest.raises(MetricError):
        accuracy([0, 1], [0])


# ---------------------------------------------------------------------------
# AUC
# ---------------------------------------------------------------------------


def _proba_from_scores(scores):
    scores = np.asarray(scores, dtype=float)
    return np.column_stack([1 - scores, scores])


def test_auc_perfect_and_tied():
    y = [0, 0, 1, 1]
    assert auc(y, _proba_from_scores([0.1, 0.2, 0.8, 0.9])) == 1.0
    assert auc(y, _proba_from_scores([0.5, 0.5, 0.5, 0.5])) == 0.5


def test_auc_hand_example():
    y = [0, 0, 1, 1]
    assert auc(y, _proba_from_scores([0.1, 0.4, 0.35, 0.8])) == 0.75


def test_auc_matches_pairwise_oracle():
    rng = np.random.default_rng(12)
    for _ in range(100):
        n = int(rng.integers(4, 40))
        y = rng.integers(0, 2, size=n)
        if y.min() == y.max():
            y[0] = 1 - y[0]
        scores = np.round(rng.random(n), 2)  # rounding forces ties
        want = auc_pairwise(y == 1, scores)
        got = auc(y, _proba_from_scores(scores))
        assert abs(got - want) <= 1e-12


def test_auc_invariant_under_monotone_transform():
    rng = np.random.default_rng(3)
    y = rng.integers(0, 2, size=30)
    y[0], y[1] = 0, 1
    s = rng.random(30)
    base = auc(y, _proba_from_scores(s))
    warped = auc(y, _proba_from_scores(1 / (1 + np.exp(-5 * s))))
    assert abs(base - warped) <= 1e-12


def test_auc_multiclass_macro():
    y = np.array([0, 0, 1, 1, 2, 2])
    proba = np.array(
        [
            [0.8, 0.1, 0.1],
            [0.7, 0.2, 0.1],
            [0.1, 0.8, 0.1],
            [0.2, 0.6, 0.2],
            [0.1, 0.1, 0.8],
            [0.2, 0.2, 0.6],
        ]
    )
    # every one-vs-rest slice separates perfectly
    assert auc(y, proba) == 1.0
    slices = [auc_pairwise(y == c, proba[:, c]) for c in range(3)]
    assert abs(auc(y, proba) - np.mean(slices)) <= 1e-12


def test_auc_rejects_single_class():
    with pytest.raises(MetricError):
        auc([1, 1, 1], _proba_from_scores([0.1, 0.2, 0.3]))


# ---------------------------------------------------------------------------
# CLSACC
# ---------------------------------------------------------------------------


def test_clsacc_relabelings_are_perfect():
    y = np.array([0, 0, 1, 1, 2, 2])
    clusters = np.array([5, 5, 9, 9, 7, 7])
    assert clustering_accuracy(y, clusters) == 1.0


def test_clsacc_hand_examples():
    assert clustering_accuracy([0, 0, 1, 1], [0, 1, 0, 1]) == 0.5
    assert clustering_accuracy([0, 1, 0, 1], [0, 0, 0, 0]) == 0.5  # one cluster, balanced classes


def test_clsacc_matches_brute_force():
    rng = np.random.default_rng(21)
    for _ in range(200):
        n = int(rng.integers(2, 9))
        y = rng.integers(0, 3, size=n)
        clusters = rng.integers(0, 3, size=n)
        assert clustering_accuracy(y, clusters) == pytest.approx(clsacc_brute_force(y, clusters), abs=0)


def test_clsacc_invariant_under_relabeling():
    rng = np.random.default_rng(4)
    y = rng.integers(0, 3, size=30)
    clusters = rng.integers(0, 4, size=30)
    base = clustering_accuracy(y, clusters)
    remap_y = np.array([2, 0, 1])[y]
    remap_c = np.array([9, 3, 7, 1])[clusters]
    assert clustering_accuracy(remap_y, remap_c) == base


# ---------------------------------------------------------------------------
# NMI
# ---------------------------------------------------------------------------


def test_nmi_identical_partitions():
    assert nmi([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0


def test_nmi_single_cluster_is_zero():
    assert nmi([0, 0, 1, 1], [0, 0, 0, 0]) == 0.0


def test_nmi_degenerate_identical_single_cluster():
    assert nmi([0, 0, 0], [4, 4, 4]) == 1.0


def test_nmi_hand_example_matches_direct_arithmetic():
    y = [0, 0, 1, 1]
    c = [0, 0, 0, 1]
    assert nmi(y, c) == pytest.approx(nmi_direct(y, c), abs=1e-12)


def test_nmi_matches_direct_arithmetic_randomized():
    rng = np.random.default_rng(8)
    for _ in range(100):
        n = int(rng.integers(2, 25))
        y = rng.integers(0, 4, size=n)
        c = rng.integers(0, 4, size=n)
        assert nmi(y, c) == pytest.approx(nmi_direct(y, c), abs=1e-12)


def test_nmi_symmetric_and_bounded():
    rng = np.random.default_rng(9)
    for _ in range(50):
        y = rng.integers(0, 3, size=20)
        c = rng.integers(0, 5, size=20)
        a, b = nmi(y, c), nmi(c, y)
        assert abs(a - b) <= 1e-12
        assert 0.0 <= a <= 1.0


# ---------------------------------------------------------------------------
# AAD
# ---------------------------------------------------------------------------


def test_aad_full_selection_is_zero():
    ds = make_synthetic(50, 8, 3, 2, seed=2)
    X_std, _ = standardize(ds.X)
    assert aad(X_std, np.arange(8)) <= 1e-9


def test_aad_dropping_all_structure_is_near_one():
    # columns 0..2 carry one strongly shared blob coordinate; column 3 is
    # independent noise, so the top principal direction avoids it entirely
    rng = np.random.default_rng(7)
    z = np.where(rng.random(300) < 0.5, -4.0, 4.0) + rng.normal(size=300) * 0.05
    X = np.column_stack([z, z + rng.normal(size=300) * 0.05, z + rng.normal(size=300) * 0.05, rng.normal(size=300)])
    X_std, _ = standardize(X)
    assert aad(X_std, [3]) > 0.9


def test_aad_bounded_and_set_invariant():
    ds = make_synthetic(60, 12, 4, 2, seed=5)
    X_std, _ = standardize(ds.X)
    rng = np.random.default_rng(6)
    for _ in range(30):
        k = int(rng.integers(1, 13))
        sel = rng.choice(12, size=k, replace=False)
        value = aad(X_std, sel)
        assert 0.0 <= value <= 1.0
        assert aad(X_std, sel[::-1]) == value  # selection is a set


def test_aad_empty_selection_rejected():
    ds = make_synthetic(20, 5, 2, 2, seed=0)
    X_std, _ = standardize(ds.X)
    with pytest.raises(MetricError):
        aad(X_std, [])


# ---------------------------------------------------------------------------
# custom metrics
# ---------------------------------------------------------------------------


def test_snn_identity_subset_is_one():
    ds = make_synthetic(30, 6, 2, 2, seed=1)
    metric = CustomMetric(name="SNN_K5", fn=snn_consistency_k5)
    assert eval_custom(metric, ds.X, ds.X, ds.y) == 1.0


def test_snn_neighbor_count_clamped_on_tiny_data():
    # 4 instances clamp k to 3; identical spaces still agree perfectly
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    assert snn_consistency_k5(X, X, None) == 1.0
    seen = {}

    def probe(X_orig, X_sub, y):
        seen["k"] = min(5, X_orig.shape[0] - 1)
        return 0.0

    eval_custom(CustomMetric(name="probe", fn=probe), X, X, None)
    assert seen["k"] == 3


def test_custom_metric_nan_is_an_error():
    metric = CustomMetric(name="bad", fn=lambda a, b, c: float("nan"))
    with pytest.raises(MetricError, match="non-finite"):
        eval_custom(metric, np.zeros((3, 2)), np.zeros((3, 1)), [0, 1, 0])


def test_custom_metric_name_collision_rejected():
    with pytest.raises(MetricError, match="collides"):
        CustomMetric(name="AUC", fn=lambda a, b, c: 1.0)
