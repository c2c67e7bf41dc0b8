"""Self-contained learning primitives used by the evaluators.

A randomized decision forest (axis-aligned Gini splits, bootstrap
sampling, per-node feature subsampling), Lloyd's k-means with k-means++
initialization, principal component extraction, and minimum-cost
assignment. The tree grower is compiled with numba; everything else is
plain numpy/scipy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.optimize import linear_sum_assignment


class LearnerError(ValueError):
    """A learner received invalid input."""


# ---------------------------------------------------------------------------
# decision forest
# ---------------------------------------------------------------------------

_LEAF = -1


@njit(cache=True)
def _grow_tree(X, y, n_classes, max_features, min_leaf, seed):
    """Grow one CART-style tree on a bootstrap sample of (X, y).

    Gini-impurity splits over max_features randomly chosen candidate
    features per node; nodes are split while impure and large enough to
    leave min_leaf samples on each side. Returns flat node arrays:
    (feature, threshold, left, right, class_counts).
    """
    n, d = X.shape
    cap = 2 * n + 1
    feature = np.full(cap, _LEAF, np.int64)
    threshold = np.zeros(cap, np.float64)
    left = np.full(cap, _LEAF, np.int64)
    right = np.full(cap, _LEAF, np.int64)
    counts = np.zeros((cap, n_classes), np.float64)

    np.random.seed(seed)
    work = np.empty(n, np.int64)
    for i in range(n):
        work[i] = np.random.randint(0, n)  # bootstrap with replacement

    stack_node = np.empty(cap, np.int64)
    stack_lo = np.empty(cap, np.int64)
    stack_hi = np.empty(cap, np.int64)
    stack_node[0] = 0
    stack_lo[0] = 0
    stack_hi[0] = n
    top = 1
    n_nodes = 1

    feat_pool = np.empty(d, np.int64)
    for j in range(d):
        feat_pool[j] = j
    vals = np.empty(n, np.float64)
    labs = np.empty(n, np.int64)
    tmp_buf = np.empty(n, np.int64)

    while top > 0:
        top -= 1
        node = stack_node[top]
        lo = stack_lo[top]
        hi = stack_hi[top]
        m = hi - lo

        cnt = np.zeros(n_classes, np.float64)
        for i in range(lo, hi):
            cnt[y[work[i]]] += 1.0
        for c in range(n_classes):
            counts[node, c] = cnt[c]

        n_present = 0
        for c in range(n_classes):
            if cnt[c] > 0:
                n_present += 1
        if n_present <= 1 or m < 2 * min_leaf:
            continue

        # partial Fisher-Yates: first max_features entries become the candidates
        for j in range(max_features):
            r = j + np.random.randint(0, d - j)
            tmp = feat_pool[j]
            feat_pool[j] = feat_pool[r]
            feat_pool[r] = tmp

        best_cost = np.inf
        best_f = -1
        best_t = 0.0
        for jj in range(max_features):
            f = feat_pool[jj]
            for i in range(m):
                vals[i] = X[work[lo + i], f]
                labs[i] = y[work[lo + i]]
            order = np.argsort(vals[:m], kind="mergesort")
            lcnt = np.zeros(n_classes, np.float64)
            rcnt = cnt.copy()
            for i in range(m - 1):
                c = labs[order[i]]
                lcnt[c] += 1.0
                rcnt[c] -= 1.0
                nl = i + 1.0
                nr = m - nl
                if nl < min_leaf or nr < min_leaf:
                    continue
                v0 = vals[order[i]]
                v1 = vals[order[i + 1]]
                if v0 == v1:
                    continue
                sl = 0.0
                sr = 0.0
                for c2 in range(n_classes):
                    sl += lcnt[c2] * lcnt[c2]
                    sr += rcnt[c2] * rcnt[c2]
                # m * weighted Gini, up to the constant offset m
                cost = (nl - sl / nl) + (nr - sr / nr)
                if cost < best_cost:
                    best_cost = cost
                    best_f = f
                    best_t = 0.5 * (v0 + v1)
        if best_f < 0:
            continue

        nl = 0
        nr = 0
        for i in range(lo, hi):
            if X[work[i], best_f] <= best_t:
                work[lo + nl] = work[i]
                nl += 1
            else:
                tmp_buf[nr] = work[i]
                nr += 1
        for i in range(nr):
            work[lo + nl + i] = tmp_buf[i]

        feature[node] = best_f
        threshold[node] = best_t
        lid = n_nodes
        rid = n_nodes + 1
        n_nodes += 2
        left[node] = lid
        right[node] = rid
        stack_node[top] = lid
        stack_lo[top] = lo
        stack_hi[top] = lo + nl
        top += 1
        stack_node[top] = rid
        stack_lo[top] = lo + nl
        stack_hi[top] = hi
        top += 1

    return (
        feature[:n_nodes].copy(),
        threshold[:n_nodes].copy(),
        left[:n_nodes].copy(),
        right[:n_nodes].copy(),
        counts[:n_nodes].copy(),
    )


@njit(cache=True)
def _tree_votes(feature, threshold, left, right, counts, X, votes):
    """Route rows of X through one tree, adding each hard vote into votes."""
    n = X.shape[0]
    n_classes = counts.shape[1]
    for i in range(n):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        best = 0
        bv = counts[node, 0]
        for c in range(1, n_classes):
            if counts[node, c] > bv:
                bv = counts[node, c]
                best = c
        votes[i, best] += 1.0


@dataclass(frozen=True)
class ForestModel:
    """A fitted decision forest; predict_proba rows are vote fractions."""

    trees: tuple
    n_classes: int
    n_features: int
    feature_subsample: int


def forest_fit(X_train, y_train, seed: int, n_trees: int = 100) -> ForestModel:
    """Fit a forest of n_trees bootstrap trees; deterministic given seed.

    Each tree uses Gini splits over ceil(sqrt(d)) randomly chosen
    candidate features per node and is grown until pure or until a split
    would leave fewer than 2 samples in a leaf.
    """
    X = np.ascontiguousarray(np.asarray(X_train, dtype=np.float64))
    y = np.ascontiguousarray(np.asarray(y_train, dtype=np.int64))
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise LearnerError("X_train must be 2-D with one label per row")
    if n_trees < 1:
        raise LearnerError("n_trees must be >= 1")
    classes = np.unique(y)
    if classes.size < 2:
        raise LearnerError("training fold has a single class")
    n_classes = int(y.max()) + 1
    max_features = int(math.ceil(math.sqrt(X.shape[1])))
    tree_seeds = np.random.default_rng(seed).integers(0, 2**31 - 1, size=n_trees)
    trees = tuple(
        _grow_tree(X, y, n_classes, max_features, 2, int(s)) for s in tree_seeds
    )
    return ForestModel(
        trees=trees, n_classes=n_classes, n_features=X.shape[1], feature_subsample=max_features
    )


def forest_predict_proba(model: ForestModel, X) -> np.ndarray:
    """Per-class vote fractions; row i, class c = (votes for c) / n_trees."""
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise LearnerError(f"expected {model.n_features} feature columns, got {X.shape}")
    votes = np.zeros((X.shape[0], model.n_classes), dtype=np.float64)
    for tree in model.trees:
        _tree_votes(*tree, X, votes)
    return votes / len(model.trees)


def forest_predict(model: ForestModel, X) -> np.ndarray:
    """Majority-vote class labels (ties broken toward the lower class index)."""
    return np.argmax(forest_predict_proba(model, X), axis=1)


# ---------------------------------------------------------------------------
# k-means
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KMeansResult:
    assignments: np.ndarray
    centroids: np.ndarray
    inertia: float


def _sq_distances(X, centroids):
    # ||x - c||^2 via the expansion; clip tiny negatives from cancellation
    d2 = (
        (X * X).sum(axis=1)[:, None]
        - 2.0 * X @ centroids.T
        + (centroids * centroids).sum(axis=1)[None, :]
    )
    return np.maximum(d2, 0.0)


def kmeans(X, k: int, seed: int, max_iter: int = 300) -> KMeansResult:
    """Lloyd's algorithm with k-means++ seeding; deterministic given seed.

    Iterates until the assignments reach a fixpoint or max_iter. An
    empty cluster is repaired by re-seeding its centroid at the point
    farthest from it.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise LearnerError(f"k={k} must be in [1, n_instances={n}]")
    rng = np.random.default_rng(seed)

    # k-means++ seeding
    centroids = np.empty((k, X.shape[1]), dtype=np.float64)
    centroids[0] = X[rng.integers(n)]
    if k > 1:
        d2 = _sq_distances(X, centroids[:1]).ravel()
        for j in range(1, k):
            total = d2.sum()
            if total > 0:
                idx = rng.choice(n, p=d2 / total)
            else:
                idx = rng.integers(n)
            centroids[j] = X[idx]
            d2 = np.minimum(d2, _sq_distances(X, centroids[j : j + 1]).ravel())

    assign = None
    for _ in range(max_iter):
        d2 = _sq_distances(X, centroids)
        new_assign = np.argmin(d2, axis=1)
        for j in range(k):
            if not np.any(new_assign == j):
                # re-seed the empty cluster at the point farthest from its centroid
                far = int(np.argmax(d2[:, j]))
                centroids[j] = X[far]
                d2 = _sq_distances(X, centroids)
                new_assign = np.argmin(d2, axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for j in range(k):
            centroids[j] = X[assign == j].mean(axis=0)
    else:
        assign = np.argmin(_sq_distances(X, centroids), axis=1)

    inertia = float(((X - centroids[assign]) ** 2).sum())
    return KMeansResult(assignments=assign, centroids=centroids, inertia=inertia)


# ---------------------------------------------------------------------------
# principal components
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrincipalBasis:
    """Top principal directions as orthonormal rows, eigenvalues non-increasing."""

    components: np.ndarray
    explained_variance: np.ndarray


def principal_basis(X, m: int) -> PrincipalBasis:
    """Top-m eigenvectors of the sample covariance of X.

    Component signs are fixed so the largest-magnitude coordinate of
    each component is positive.
    """
    X = np.asarray(X, dtype=np.float64)
    n, d = X.shape
    if not 1 <= m <= min(n - 1, d):
        raise LearnerError(f"m={m} must be in [1, min(n_instances-1, n_features)={min(n - 1, d)}]")
    Xc = X - X.mean(axis=0)
    cov = (Xc.T @ Xc) / (n - 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1][:m]
    components = evecs[:, order].T.copy()
    for i in range(m):
        peak = int(np.argmax(np.abs(components[i])))
        if components[i, peak] < 0:
            components[i] = -components[i]
    return PrincipalBasis(components=components, explained_variance=evals[order].copy())


# ---------------------------------------------------------------------------
# assignment
# ---------------------------------------------------------------------------


def optimal_assignment(cost) -> np.ndarray:
    """Permutation minimizing the total cost of a square matrix."""
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise LearnerError("cost matrix must be square")
    if not np.all(np.isfinite(cost)):
        raise LearnerError("cost matrix must be finite")
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(cost.shape[0], dtype=np.int64)
    perm[rows] = cols
    return perm
