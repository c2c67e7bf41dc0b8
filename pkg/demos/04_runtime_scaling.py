"""Runtime stress-test: how selector cost scales with features and instances.

The timer sweeps synthetic datasets along each axis (500 instances with
growing feature counts; 100 features with growing instance counts),
timing one ranking call per point (median of 3). A slow selector with a
tight time limit demonstrates the cutoff contract: the first offending
point is marked timed out and larger sizes are skipped.

Run with: python demos/04_runtime_scaling.py
"""

import time

import numpy as np

from fsbench import RunConfig, SelectorSpec, get_selector, timer

config = RunConfig(base_seed=0)

records = timer(config, [get_selector("Variance_Baseline"), get_selector("Random")], vary_param="both", time_limit=3600)
print("method              axis       n_inst  n_feat   seconds")
for r in records:
    print(f"{r.method:18s}  {r.axis:9s}  {r.n_instances:6d}  {r.n_features:6d}   {r.seconds:.6f}")

feats = [r for r in records if r.method == "Variance_Baseline" and r.axis == "features"]
slope = np.polyfit(np.log([r.n_features for r in feats]), np.log([r.seconds for r in feats]), 1)[0]
print(f"\nVariance_Baseline log-log slope vs n_features: {slope:.2f} (linear cost ~ 1.0)")


def sluggish(X):
    time.sleep(0.4)
    return np.ones(X.shape[1])


slow = SelectorSpec(name="Sluggish", kind="unsupervised", stochastic=False, scorer=sluggish)
cut = timer(config, [slow], vary_param="features", time_limit=0.3)
print(f"\nSluggish with time_limit=0.3s: {len(cut)} point(s), timed_out={cut[0].timed_out}")
print("larger sizes on the axis were skipped")
