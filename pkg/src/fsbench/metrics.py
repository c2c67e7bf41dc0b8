"""Per-grid-point evaluation metrics.

Built-ins: ACC and AUC for supervised evaluation, CLSACC and NMI for
clustering-based evaluation, and the model-agnostic principal-direction
angle score (AAD, lower is better). User metrics plug in as callables
of (X_orig, X_sub, y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import rankdata

from .learners import optimal_assignment, principal_basis


class MetricError(ValueError):
    """A metric computation received invalid input or produced an invalid result."""


# metric name -> (higher_is_better, evaluation family)
BUILTIN_METRICS = {
    "ACC": (True, "supervised"),
    "AUC": (True, "supervised"),
    "CLSACC": (True, "unsupervised"),
    "NMI": (True, "unsupervised"),
    "AAD": (False, "model_agnostic"),
}


def accuracy(y_true, y_pred) -> float:
    """Fraction of exact label matches."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.size == 0:
        raise MetricError("label vectors must be non-empty and of equal length")
    return float(np.mean(y_true == y_pred))


def _binary_auc(pos_mask: np.ndarray, scores: np.ndarray) -> float | None:
    """Mann-Whitney AUC of positive-class scores; ties count 1/2.

    Returns None for a degenerate slice (no positives or no negatives).
    """
    n_pos = int(pos_mask.sum())
    n_neg = pos_mask.size - n_pos
    if n_pos == 0 or n_neg == 0:
        return None
    ranks = rankdata(scores)  # average ranks handle ties as 1/2
    u = ranks[pos_mask].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def auc(y_true, proba) -> float:
    """Area under the ROC curve from a class-probability matrix.

    Binary: Mann-Whitney statistic of the positive-class scores.
    Multiclass: unweighted macro average of one-vs-rest AUCs over the
    classes present in y_true; degenerate slices are skipped.
    """
    y_true = np.asarray(y_true)
    proba = np.asarray(proba, dtype=np.float64)
    if proba.ndim != 2 or proba.shape[0] != y_true.shape[0]:
        raise MetricError("probability matrix must have one row per label")
    present = np.unique(y_true)
    if present.size < 2:
        raise MetricError("AUC needs at least 2 classes present")
    if int(present.max()) >= proba.shape[1]:
        raise MetricError("probability matrix has no column for some class")
    if present.size == 2:
        pos = int(present[1])
        value = _binary_auc(y_true == pos, proba[:, pos])
        if value is None:
            raise MetricError("degenerate binary AUC slice")
        return value
    slices = []
    for c in present:
        value = _binary_auc(y_true == c, proba[:, int(c)])
        if value is not None:
            slices.append(value)
    if not slices:
        raise MetricError("all one-vs-rest AUC slices are degenerate")
    return float(np.mean(slices))


def _contingency(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.float64)
    np.add.at(table, (ai, bi), 1.0)
    return table


def clustering_accuracy(y_true, clusters) -> float:
    """Best label agreement under an optimal one-to-one cluster-to-class map."""
    y_true = np.asarray(y_true)
    clusters = np.asarray(clusters)
    if y_true.shape != clusters.shape or y_true.size == 0:
        raise MetricError("label vectors must be non-empty and of equal length")
    table = _contingency(clusters, y_true)
    size = max(table.shape)
    padded = np.zeros((size, size), dtype=np.float64)
    padded[: table.shape[0], : table.shape[1]] = table
    perm = optimal_assignment(-padded)
    matched = padded[np.arange(size), perm].sum()
    return float(matched / y_true.size)


def _first_appearance(labels: np.ndarray) -> np.ndarray:
    seen: dict = {}
    out = np.empty(labels.size, dtype=np.int64)
    for i, v in enumerate(labels):
        key = int(v)
        if key not in seen:
            seen[key] = len(seen)
        out[i] = seen[key]
    return out


def nmi(y_true, clusters) -> float:
    """Normalized mutual information, I / sqrt(H(U) * H(V)), natural log.

    If either entropy is 0 the value is 1 when the two set partitions
    are identical and 0 otherwise.
    """
    y_true = np.asarray(y_true)
    clusters = np.asarray(clusters)
    if y_true.shape != clusters.shape or y_true.size == 0:
        raise MetricError("label vectors must be non-empty and of equal length")
    table = _contingency(y_true, clusters)
    n = y_true.size
    pij = table / n
    pi = pij.sum(axis=1)
    pj = pij.sum(axis=0)
    hu = -np.sum(pi[pi > 0] * np.log(pi[pi > 0]))
    hv = -np.sum(pj[pj > 0] * np.log(pj[pj > 0]))
    if hu <= 0.0 or hv <= 0.0:
        identical = np.array_equal(_first_appearance(y_true), _first_appearance(clusters))
        return 1.0 if identical else 0.0
    mask = pij > 0
    outer = pi[:, None] * pj[None, :]
    info = float(np.sum(pij[mask] * np.log(pij[mask] / outer[mask])))
    return float(min(1.0, max(0.0, info / math.sqrt(hu * hv))))


def aad(X_orig, selected) -> float:
    """Mean principal-direction angle between the original and masked space.

    Compares the top-m principal directions of the standardized matrix
    against those of the same matrix with all non-selected columns
    zeroed, m = min(|selected|, n_instances - 1, 10). Angles are
    normalized to [0, 1] by pi/2; lower is better.
    """
    X = np.asarray(X_orig, dtype=np.float64)
    idx = np.unique(np.asarray(selected, dtype=np.int64))
    if idx.size == 0:
        raise MetricError("selection must be non-empty")
    if idx.min() < 0 or idx.max() >= X.shape[1]:
        raise MetricError("selected index out of range")
    m = min(idx.size, X.shape[0] - 1, 10)
    basis_orig = principal_basis(X, m)
    masked = np.zeros_like(X)
    masked[:, idx] = X[:, idx]
    basis_sub = principal_basis(masked, m)
    angles = np.empty(m)
    for i in range(m):
        v, w = basis_orig.components[i], basis_sub.components[i]
        if float(v @ w) < 0.0:
            w = -w
        # arccos(|v.w|) in the numerically stable half-chord form: exact 0
        # for identical directions instead of arccos of 1 - epsilon
        angles[i] = 2.0 * math.asin(min(1.0, float(np.linalg.norm(v - w)) / 2.0))
    return float(np.mean(angles) / (math.pi / 2.0))


@dataclass(frozen=True)
class CustomMetric:
    """A user-registered metric: fn(X_orig, X_sub, y) -> real."""

    name: str
    fn: Callable
    higher_is_better: bool = True

    def __post_init__(self):
        if self.name in BUILTIN_METRICS:
            raise MetricError(f"custom metric name {self.name!r} collides with a built-in")


def eval_custom(metric: CustomMetric, X_orig, X_sub, y) -> float:
    """Evaluate a custom metric; non-finite results raise instead of passing through."""
    value = metric.fn(X_orig, X_sub, y)
    value = float(value)
    if not math.isfinite(value):
        raise MetricError(f"custom metric {metric.name!r} returned a non-finite value")
    return value
