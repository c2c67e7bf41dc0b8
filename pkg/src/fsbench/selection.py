"""Feature-selector contract, built-in baselines, ratio grids, and subsets.

Selectors are rankers: a scorer maps a feature matrix (plus labels for
supervised selectors) to one importance score per feature, higher =
more important. Evaluation grids then materialize prefixes of the
induced ranking, so subsets are nested by construction.
"""

from __future__ import annotations

import contextlib
import os
import subprocess
from dataclasses import dataclass
from io import StringIO
from typing import Callable, NamedTuple

import numpy as np


class SelectionError(ValueError):
    """A selector, grid, or subset request violated its contract."""


EXPERIMENTS = ("10Percent", "100Percent")

# experiment -> (ratio denominator, number of steps); ratio_i = i / denom
_GRID_STEPS = {"10Percent": (200, 20), "100Percent": (20, 20)}


@dataclass(frozen=True)
class SelectorSpec:
    """A named feature ranker.

    scorer is called as scorer(X) for unsupervised selectors and
    scorer(X, y) for supervised ones, inside a seeded numpy RNG context;
    it must return one finite score per feature.
    """

    name: str
    kind: str  # "supervised" | "unsupervised"
    stochastic: bool
    scorer: Callable

    def __post_init__(self):
        if self.kind not in ("supervised", "unsupervised"):
            raise SelectionError(f"selector kind must be supervised|unsupervised, got {self.kind!r}")


@dataclass(frozen=True)
class FeatureRanking:
    """Per-feature importance scores and the induced feature order.

    order is a permutation of feature indices, descending by score with
    ties broken by ascending feature index.
    """

    scores: np.ndarray
    order: np.ndarray


class GridPoint(NamedTuple):
    ratio: float
    k: int


@dataclass(frozen=True)
class RatioGrid:
    """Ordered (ratio, feature-count) evaluation points for one experiment."""

    experiment: str
    points: tuple


def build_grid(experiment: str, n_features: int) -> RatioGrid:
    """Build the feature-ratio grid for an experiment.

    "10Percent" covers the first 10% of features in 0.5% steps;
    "100Percent" covers the entire range in 5% steps (20 ratios each).
    Each ratio maps to k = max(1, round-half-up(ratio * n_features));
    consecutive duplicate k values are collapsed keeping the first ratio.
    """
    if experiment not in _GRID_STEPS:
        raise SelectionError(f"unknown experiment {experiment!r}; expected one of {EXPERIMENTS}")
    if n_features < 1:
        raise SelectionError("n_features must be >= 1")
    denom, steps = _GRID_STEPS[experiment]
    points = []
    prev_k = None
    for i in range(1, steps + 1):
        # round-half-up of (i * n_features / denom) in exact integer arithmetic
        k = (2 * i * n_features + denom) // (2 * denom)
        k = min(max(1, k), n_features)
        if k != prev_k:
            points.append(GridPoint(ratio=i / denom, k=k))
            prev_k = k
    return RatioGrid(experiment=experiment, points=tuple(points))


# Seed visible to scorers that shell out (see subprocess_selector).
_SEED_ENV_VAR = "FSBENCH_SELECTOR_SEED"
_current_seed: list = [None]


@contextlib.contextmanager
def _seeded_context(seed: int):
    """Temporarily seed numpy's global RNG so plain scorers are reproducible."""
    state = np.random.get_state()
    prev = _current_seed[0]
    np.random.seed(seed & 0xFFFFFFFF)
    _current_seed[0] = seed
    try:
        yield
    finally:
        np.random.set_state(state)
        _current_seed[0] = prev


def rank_features(spec: SelectorSpec, dataset, seed: int) -> FeatureRanking:
    """Invoke a selector once under a seeded RNG context and rank its scores.

    Ties are broken deterministically by ascending feature index.
    """
    with _seeded_context(seed):
        if spec.kind == "supervised":
            raw = spec.scorer(dataset.X, dataset.y)
        else:
            raw = spec.scorer(dataset.X)
    scores = np.asarray(raw, dtype=np.float64).reshape(-1)
    if scores.shape[0] != dataset.n_features:
        raise SelectionError(
            f"selector {spec.name!r} returned {scores.shape[0]} scores for {dataset.n_features} features"
        )
    if not np.all(np.isfinite(scores)):
        raise SelectionError(f"selector {spec.name!r} returned non-finite scores")
    order = np.argsort(-scores, kind="stable")
    scores.flags.writeable = False
    order.flags.writeable = False
    return FeatureRanking(scores=scores, order=order)


def random_baseline(X: np.ndarray, seed: int | None = None) -> np.ndarray:
    """Uniform-random importance scores in [0, 1), one per feature.

    With an explicit seed the draw comes from a dedicated generator;
    otherwise it reads the ambient RNG context set by rank_features.
    """
    d = int(np.asarray(X).shape[1])
    if d < 1:
        raise SelectionError("X must have at least one feature")
    if seed is None:
        return np.random.random(d)
    return np.random.default_rng(seed).random(d)


def variance_baseline(X: np.ndarray) -> np.ndarray:
    """Per-column sample variance (ddof=1) of the raw matrix."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] < 1:
        raise SelectionError("X must be a non-empty 2-D matrix")
    return np.var(X, axis=0, ddof=1)


def take_subset(dataset, ranking: FeatureRanking, k: int):
    """Materialize the top-k ranked columns; returns (X_sub, column indices)."""
    if not 1 <= k <= dataset.n_features:
        raise SelectionError(f"k={k} out of range [1, {dataset.n_features}]")
    idx = ranking.order[:k]
    return dataset.X[:, idx], idx


def _random_scorer(X):
    return random_baseline(X)


def built_in_selectors() -> dict:
    """Registry of built-in selectors, addressed by name."""
    return {
        "Random": SelectorSpec(name="Random", kind="unsupervised", stochastic=True, scorer=_random_scorer),
        "Variance_Baseline": SelectorSpec(
            name="Variance_Baseline", kind="unsupervised", stochastic=False, scorer=variance_baseline
        ),
    }


def get_selector(name: str) -> SelectorSpec:
    registry = built_in_selectors()
    if name not in registry:
        raise SelectionError(f"unknown selector {name!r}; built-ins: {sorted(registry)}")
    return registry[name]


class _SubprocessScorer:
    """Scorer that pipes the dataset CSV to an external command.

    The command receives the dataset (header row, label last column) on
    stdin, the current context seed in the environment variable
    FSBENCH_SELECTOR_SEED, and must print one score per feature line by
    line on stdout.
    """

    def __init__(self, command):
        self.command = list(command)

    def __call__(self, X, y=None):
        X = np.asarray(X, dtype=np.float64)
        n, d = X.shape
        buf = StringIO()
        buf.write(",".join([f"f{j}" for j in range(d)] + ["label"]) + "\n")
        labels = y if y is not None else np.zeros(n, dtype=np.int64)
        for i in range(n):
            buf.write(",".join(repr(float(v)) for v in X[i]) + f",{int(labels[i])}\n")
        env = dict(os.environ)
        if _current_seed[0] is not None:
            env[_SEED_ENV_VAR] = str(_current_seed[0])
        proc = subprocess.run(
            self.command, input=buf.getvalue(), capture_output=True, text=True, env=env
        )
        if proc.returncode != 0:
            raise SelectionError(
                f"selector command {self.command} exited {proc.returncode}: {proc.stderr.strip()}"
            )
        try:
            return np.array([float(line) for line in proc.stdout.split()], dtype=np.float64)
        except ValueError:
            raise SelectionError(f"selector command {self.command} printed non-numeric scores") from None


def subprocess_selector(name: str, command, kind: str = "unsupervised", stochastic: bool = False) -> SelectorSpec:
    """Wrap an external command as a SelectorSpec (see _SubprocessScorer)."""
    return SelectorSpec(name=name, kind=kind, stochastic=stochastic, scorer=_SubprocessScorer(command))
