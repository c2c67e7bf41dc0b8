"""Plugging in your own metric and your own selector.

A custom metric is any callable (X_orig, X_sub, y) -> real. Here:
shared nearest-neighbor consistency, the fraction of k=5 neighbors a
point keeps after feature selection. A custom selector is a scorer
returning one importance per feature; external programs can join via
the subprocess adapter (dataset CSV on stdin, one score per line out).

Run with: python demos/05_custom_metric_and_selector.py
"""

import sys

import numpy as np

from fsbench import CustomMetric, ForestClassifier, RunConfig, SelectorSpec, get_selector, make_synthetic, run


def snn_consistency_k5(X_orig, X_sub, y):
    k = min(5, X_orig.shape[0] - 1)

    def neighbors(data):
        d2 = ((data[:, None, :] - data[None, :, :]) ** 2).sum(axis=2)
        return np.argsort(d2, axis=1, kind="stable")[:, 1 : k + 1]

    nn_orig, nn_sub = neighbors(X_orig), neighbors(X_sub)
    shared = [len(np.intersect1d(nn_orig[i], nn_sub[i])) for i in range(len(nn_orig))]
    return np.mean(shared) / k


# an in-process custom selector: negated column index (prefers late columns)
backwards = SelectorSpec(
    name="Backwards", kind="unsupervised", stochastic=False,
    scorer=lambda X: np.arange(X.shape[1], dtype=float),
)

# the same variance baseline as an external process, for comparison
variance_cmd = [
    sys.executable, "-c",
    "import csv,statistics,sys\n"
    "rows=list(csv.reader(sys.stdin))\n"
    "for col in zip(*[[float(x) for x in r[:-1]] for r in rows[1:]]):\n"
    "    print(statistics.variance(col))",
]

config = RunConfig(
    output_dir="demo_custom_results",
    cv=3,
    avg_steps=2,
    supervised_iter=1,
    unsupervised_iter=2,
    eval_type=("supervised", "unsupervised", "model_agnostic", "custom"),
    experiments=("100Percent",),
    base_seed=3,
)

from fsbench import subprocess_selector

methods = [get_selector("Random"), backwards, subprocess_selector("Ext_Variance", variance_cmd)]
dataset = make_synthetic(80, 20, 6, 2, seed=5, name="demo")
metric = CustomMetric(name="SNN_K5", fn=snn_consistency_k5)

result = run(config, [dataset], methods, classifier=ForestClassifier(n_trees=20), custom_metrics=[metric])
print(f"wrote {result.output_dir}/results.csv\n")
print("SNN_K5 at the largest three grid points (higher = structure kept):")
for rec in result.records:
    if rec.metric == "SNN_K5" and rec.ratio >= 0.9:
        print(f"  {rec.method:14s} ratio {rec.ratio:.2f}  SNN_K5 = {rec.mean:.3f}")
