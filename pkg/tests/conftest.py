"""Shared test helpers: small datasets and reference implementations."""

import numpy as np
import pytest

from fsbench import make_synthetic


@pytest.fixture
def blob_dataset():
    """Two well-separated 2-class blobs, 60 instances x 6 features."""
    return make_synthetic(60, 6, 3, 2, seed=11, name="blobs")


def knn_indices(X, k):
    """Indices of the k nearest neighbors per row (Euclidean, self excluded)."""
    X = np.asarray(X, dtype=np.float64)
    d2 = ((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2)
    order = np.argsort(d2, axis=1, kind="stable")
    return order[:, 1 : k + 1]


def snn_consistency_k5(X_orig, X_sub, y):
    """Reference custom metric: shared nearest-neighbor consistency.

    Average proportion of k=5 nearest neighbors (clamped to n-1) shared
    between the original space and the selected subspace.
    """
    k = 5
    k = min(k, X_orig.shape[0] - 1)
    nn_orig = knn_indices(X_orig, k)
    nn_sub = knn_indices(X_sub, k)
    overlaps = [
        len(np.intersect1d(nn_orig[i], nn_sub[i])) for i in range(len(nn_orig))
    ]
    return np.mean(overlaps) / k
