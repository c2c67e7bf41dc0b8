"""Tour of the built-in evaluation metrics on a tiny synthetic dataset.

Run with: python demos/01_metrics_tour.py
"""

import numpy as np

from fsbench import (
    accuracy,
    auc,
    aad,
    clustering_accuracy,
    forest_fit,
    forest_predict,
    forest_predict_proba,
    kmeans,
    make_synthetic,
    nmi,
    standardize,
)

ds = make_synthetic(n_instances=120, n_features=10, n_informative=4, n_classes=2, seed=42)
print(f"dataset: {ds.name}, X {ds.X.shape}, {ds.n_classes} classes")

# --- supervised: train a forest on the first half, score the second half
half = ds.n_instances // 2
X_tr, stats = standardize(ds.X[:half])
X_te, _ = standardize(ds.X[half:], stats)
model = forest_fit(X_tr, ds.y[:half], seed=0, n_trees=50)
pred = forest_predict(model, X_te)
proba = forest_predict_proba(model, X_te)
print(f"ACC  = {accuracy(ds.y[half:], pred):.3f}   (fraction of exact matches)")
print(f"AUC  = {auc(ds.y[half:], proba):.3f}   (Mann-Whitney, ties count 1/2)")

# --- unsupervised: cluster the standardized matrix and compare to labels
X_std, _ = standardize(ds.X)
clusters = kmeans(X_std, ds.n_classes, seed=1).assignments
print(f"CLSACC = {clustering_accuracy(ds.y, clusters):.3f} (optimal cluster-to-class map)")
print(f"NMI    = {nmi(ds.y, clusters):.3f} (normalized mutual information)")

# --- model-agnostic: principal-direction alignment after dropping columns
print("\nAAD is lower-is-better: 0 means the selected columns preserve the")
print("principal directions of the full space.")
for selected in (np.arange(10), np.arange(4), np.arange(4, 10)):
    value = aad(X_std, selected)
    print(f"  selected columns {selected.tolist()} -> AAD = {value:.3f}")
