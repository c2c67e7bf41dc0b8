"""Evaluation orchestration, runtime stress-testing, and result persistence.

run() walks datasets x methods x experiments x grid points x repetitions
and aggregates every metric cell; timer() stress-tests selector runtime
over growing feature/instance grids. All randomness is derived from the
base seed and the cell coordinates, so results are bit-identical for a
fixed base seed regardless of worker count or scheduling.

Persisted files (all written atomically via temp file + rename):

* results.csv  - long format, header exactly
  ``dataset,method,experiment,metric,ratio,n_features,mean,std,n_runs``;
  ratio has 4 fractional digits, mean/std 6 significant digits. Rows
  with metric ``FSDEM_<m>`` / ``STAB_<m>`` carry the curve summary per
  (metric, experiment) with ratio 0.0000 and n_features 0; their n_runs
  is the number of curve points.
* runs.csv     - when save_all: the same columns plus ``rep,seed,value``,
  one row per individual score.
* timings.csv  - ``method,axis,n_instances,n_features,seconds,timed_out``.
* manifest.json - config echo, dataset shapes, method descriptors,
  metric orientations, artifact version, base seed, and any failures.

std is the sample standard deviation (ddof=1) over the flattened
repetition axis; a single-value cell reports std 0.
"""

from __future__ import annotations

import hashlib
import json
import os
import statistics
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .datasets import Dataset, make_synthetic, standardize
from .fsdem import MetricCurve, fsdem_score, fsdem_stability
from .learners import forest_fit, forest_predict, forest_predict_proba, kmeans
from .metrics import BUILTIN_METRICS, aad, accuracy, auc, clustering_accuracy, eval_custom, nmi
from .selection import SelectorSpec, build_grid, rank_features, take_subset


class RunnerError(ValueError):
    """Invalid run configuration or unsatisfiable evaluation request."""


EVAL_TYPES = ("supervised", "unsupervised", "model_agnostic", "custom")

RESULTS_HEADER = ("dataset", "method", "experiment", "metric", "ratio", "n_features", "mean", "std", "n_runs")
RUNS_HEADER = RESULTS_HEADER + ("rep", "seed", "value")
TIMINGS_HEADER = ("method", "axis", "n_instances", "n_features", "seconds", "timed_out")

# timer stress grids: geometric spacing for log-log slope fits
TIMER_FEATURE_SIZES = (100, 200, 500, 1000, 2000, 5000, 10000)  # n_instances fixed at 500
TIMER_INSTANCE_SIZES = (500, 1000, 2000, 5000, 10000, 20000)  # n_features fixed at 100


# ---------------------------------------------------------------------------
# configuration and records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Evaluation parameters; defaults follow the standard initialization set."""

    output_dir: str = "results"
    cv: int = 5
    avg_steps: int = 10
    supervised_iter: int = 5
    unsupervised_iter: int = 10
    eval_type: tuple = ("supervised", "unsupervised", "model_agnostic")
    metrics: tuple = ("CLSACC", "NMI", "ACC", "AUC", "AAD")
    stability: object = True  # True | False | list of metric names
    experiments: tuple = ("10Percent", "100Percent")
    save_all: bool = False
    base_seed: int = 0
    workers: int = 1

    def validate(self, custom_names=()):
        if self.cv < 2:
            raise RunnerError("cv must be >= 2")
        for attr in ("avg_steps", "supervised_iter", "unsupervised_iter", "workers"):
            if getattr(self, attr) < 1:
                raise RunnerError(f"{attr} must be >= 1")
        for et in self.eval_type:
            if et not in EVAL_TYPES:
                raise RunnerError(f"unknown eval_type {et!r}")
        for m in self.metrics:
            if m in BUILTIN_METRICS:
                family = BUILTIN_METRICS[m][1]
                if family not in self.eval_type:
                    raise RunnerError(f"metric {m!r} requires eval_type {family!r}")
            elif m not in custom_names:
                raise RunnerError(f"unknown metric {m!r}")
        if custom_names and "custom" not in self.eval_type:
            raise RunnerError("custom metrics given but eval_type lacks 'custom'")
        if isinstance(self.stability, (list, tuple)):
            known = set(self.metrics) | set(custom_names)
            for m in self.stability:
                if m not in known:
                    raise RunnerError(f"stability metric {m!r} is not evaluated")

    def stability_metrics(self, all_metrics) -> tuple:
        if self.stability is True:
            return tuple(all_metrics)
        if self.stability is False or self.stability is None:
            return ()
        return tuple(m for m in all_metrics if m in self.stability)


@dataclass(frozen=True)
class EvaluationRecord:
    """One aggregated (dataset, method, experiment, metric, grid point) cell."""

    dataset: str
    method: str
    experiment: str
    metric: str
    ratio: float
    n_features: int
    mean: float
    std: float
    n_runs: int


@dataclass(frozen=True)
class TimingRecord:
    """One (method, axis, size) runtime measurement."""

    method: str
    axis: str  # "features" | "instances"
    n_instances: int
    n_features: int
    seconds: float
    timed_out: bool


@dataclass
class RunResult:
    """Everything a run produced: aggregated records, raw rows, manifest."""

    records: list
    run_rows: list
    manifest: dict
    failures: list
    output_dir: Path


# ---------------------------------------------------------------------------
# deterministic seeding and folds
# ---------------------------------------------------------------------------


def derive_seed(base: int, labels, index: int) -> int:
    """Stable 64-bit seed from (base, labels, index); identical across platforms."""
    payload = repr((int(base), tuple(str(l) for l in labels), int(index))).encode("utf-8")
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big")


def stratified_folds(y: np.ndarray, cv: int, seed: int) -> list:
    """Split instance indices into cv folds preserving class proportions.

    Every fold's per-class count differs from an even split by at most
    one instance. Raises when some class has fewer members than cv.
    """
    y = np.asarray(y)
    counts = np.bincount(y)
    if counts.min() < cv:
        raise RunnerError(
            f"fold construction impossible: smallest class has {int(counts.min())} < cv={cv} instances"
        )
    rng = np.random.default_rng(seed)
    folds = [[] for _ in range(cv)]
    for c in range(counts.size):
        idx = np.flatnonzero(y == c)
        rng.shuffle(idx)
        for i, inst in enumerate(idx):
            folds[i % cv].append(int(inst))
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


# ---------------------------------------------------------------------------
# default classifier
# ---------------------------------------------------------------------------


class FittedForest:
    def __init__(self, model):
        self._model = model

    def predict_proba(self, X):
        return forest_predict_proba(self._model, X)

    def predict(self, X):
        return forest_predict(self._model, X)


class ForestClassifier:
    """Default classifier: the built-in decision forest.

    Any object with fit(X, y, seed) returning a handle that offers
    predict_proba(X) (and optionally predict(X)) can stand in.
    """

    def __init__(self, n_trees: int = 100):
        self.n_trees = n_trees

    def fit(self, X, y, seed: int) -> FittedForest:
        return FittedForest(forest_fit(X, y, seed, n_trees=self.n_trees))


# ---------------------------------------------------------------------------
# cell evaluation (the unit of parallelism)
# ---------------------------------------------------------------------------


@dataclass
class _CellTask:
    dataset: Dataset
    spec: SelectorSpec
    experiment: str
    rep: int
    config: RunConfig
    classifier: object
    custom_metrics: tuple


def _evaluate_cell(task: _CellTask):
    """Evaluate one (dataset, method, experiment, repetition) cell.

    Returns (values, failures) where values maps
    (metric, ratio, k) -> list of (sub_index, seed, value).
    """
    cfg = task.config
    ds = task.dataset
    spec = task.spec
    values: dict = {}
    failures: list = []

    def fail(stage, message, metric="", ratio=None):
        failures.append(
            {
                "dataset": ds.name,
                "method": spec.name,
                "experiment": task.experiment,
                "rep": task.rep,
                "stage": stage,
                "metric": metric,
                "ratio": ratio,
                "message": str(message),
            }
        )

    rank_seed = derive_seed(cfg.base_seed, (ds.name, spec.name, "rank"), task.rep)
    try:
        ranking = rank_features(spec, ds, rank_seed)
    except Exception as exc:  # selector failure: whole cell marked failed
        fail("selector", exc)
        return values, failures

    want = set(cfg.metrics)
    do_sup = "supervised" in cfg.eval_type and want & {"ACC", "AUC"}
    do_unsup = "unsupervised" in cfg.eval_type and want & {"CLSACC", "NMI"}
    do_aad = "model_agnostic" in cfg.eval_type and "AAD" in want
    do_custom = "custom" in cfg.eval_type and task.custom_metrics

    folds = None
    if do_sup:
        folds = stratified_folds(ds.y, cfg.cv, derive_seed(cfg.base_seed, (ds.name, "folds"), task.rep))
    X_std_full = standardize(ds.X)[0] if do_aad else None

    grid = build_grid(task.experiment, ds.n_features)
    for ratio, k in grid.points:
        X_sub, col_idx = take_subset(ds, ranking, k)

        if do_sup:
            sub = 0
            for f in range(cfg.cv):
                test_idx = folds[f]
                train_idx = np.concatenate([folds[g] for g in range(cfg.cv) if g != f])
                X_tr, stats = standardize(X_sub[train_idx])
                X_te, _ = standardize(X_sub[test_idx], stats)
                y_tr, y_te = ds.y[train_idx], ds.y[test_idx]
                for it in range(cfg.supervised_iter):
                    clf_seed = derive_seed(
                        cfg.base_seed,
                        (ds.name, spec.name, task.experiment, "clf", f"k={k}", f"fold={f}", f"iter={it}"),
                        task.rep,
                    )
                    try:
                        model = task.classifier.fit(X_tr, y_tr, clf_seed)
                        proba = model.predict_proba(X_te)
                        pred = np.argmax(proba, axis=1)
                        if "ACC" in want:
                            values.setdefault(("ACC", ratio, k), []).append((sub, clf_seed, accuracy(y_te, pred)))
                        if "AUC" in want:
                            values.setdefault(("AUC", ratio, k), []).append((sub, clf_seed, auc(y_te, proba)))
                    except Exception as exc:
                        fail("supervised", exc, metric="ACC/AUC", ratio=ratio)
                    sub += 1

        if do_unsup:
            X_us, _ = standardize(X_sub)
            for it in range(cfg.unsupervised_iter):
                km_seed = derive_seed(
                    cfg.base_seed,
                    (ds.name, spec.name, task.experiment, "kmeans", f"k={k}", f"iter={it}"),
                    task.rep,
                )
                try:
                    result = kmeans(X_us, ds.n_classes, km_seed)
                    if "CLSACC" in want:
                        values.setdefault(("CLSACC", ratio, k), []).append(
                            (it, km_seed, clustering_accuracy(ds.y, result.assignments))
                        )
                    if "NMI" in want:
                        values.setdefault(("NMI", ratio, k), []).append((it, km_seed, nmi(ds.y, result.assignments)))
                except Exception as exc:
                    fail("unsupervised", exc, metric="CLSACC/NMI", ratio=ratio)

        if do_aad:
            try:
                values.setdefault(("AAD", ratio, k), []).append((0, rank_seed, aad(X_std_full, col_idx)))
            except Exception as exc:
                fail("model_agnostic", exc, metric="AAD", ratio=ratio)

        if do_custom:
            for cm in task.custom_metrics:
                try:
                    values.setdefault((cm.name, ratio, k), []).append(
                        (0, rank_seed, eval_custom(cm, ds.X, X_sub, ds.y))
                    )
                except Exception as exc:
                    fail("custom", exc, metric=cm.name, ratio=ratio)

    return values, failures


# ---------------------------------------------------------------------------
# run orchestration
# ---------------------------------------------------------------------------


def _aggregate(value_rows):
    arr = np.array([v for (_, _, v) in value_rows], dtype=np.float64)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return mean, std, arr.size


def run(config: RunConfig, datasets, methods, classifier=None, custom_metrics=()) -> RunResult:
    """Run the full evaluation and persist the results bundle.

    Stochastic selectors repeat the whole pipeline avg_steps times with
    derived seeds; deterministic selectors run once. Selector or metric
    failures mark the affected cells failed and the run continues.
    """
    custom_metrics = tuple(custom_metrics)
    custom_names = tuple(cm.name for cm in custom_metrics)
    if len(set(custom_names)) != len(custom_names):
        raise RunnerError("custom metric names must be unique")
    config.validate(custom_names=custom_names)
    if not datasets or not methods:
        raise RunnerError("need at least one dataset and one method")
    names = [d.name for d in datasets]
    if len(set(names)) != len(names):
        raise RunnerError("dataset names must be unique")
    if len({m.name for m in methods}) != len(methods):
        raise RunnerError("method names must be unique")
    if classifier is None:
        classifier = ForestClassifier()

    all_metrics = list(config.metrics) + [
        cm.name for cm in custom_metrics if cm.name not in config.metrics
    ]

    tasks = [
        _CellTask(ds, spec, exp, rep, config, classifier, custom_metrics)
        for ds in datasets
        for spec in methods
        for exp in config.experiments
        for rep in range(config.avg_steps if spec.stochastic else 1)
    ]

    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_evaluate_cell, tasks))
    else:
        outcomes = [_evaluate_cell(t) for t in tasks]

    # merge cell values across repetitions, keyed by the full coordinates
    merged: dict = {}
    failures: list = []
    for task, (values, errs) in zip(tasks, outcomes):
        failures.extend(errs)
        for (metric, ratio, k), rows in values.items():
            key = (task.dataset.name, task.spec.name, task.experiment, metric, ratio, k)
            merged.setdefault(key, []).extend((task.rep, sub, seed, v) for (sub, seed, v) in rows)

    records = []
    run_rows = []
    for key in sorted(merged):
        ds_name, method, experiment, metric, ratio, k = key
        rows = sorted(merged[key])  # (rep, sub, seed, value) in canonical order
        mean, std, n_runs = _aggregate([(r, s, v) for (r, _, s, v) in rows])
        rec = EvaluationRecord(ds_name, method, experiment, metric, ratio, k, mean, std, n_runs)
        records.append(rec)
        if config.save_all:
            for rep, _, seed, value in rows:
                run_rows.append((rec, rep, seed, value))

    # curve summaries per (dataset, method, experiment, metric)
    stability_for = set(config.stability_metrics(all_metrics))
    summary_records = []
    curves: dict = {}
    for rec in records:
        curves.setdefault((rec.dataset, rec.method, rec.experiment, rec.metric), []).append(rec)
    for (ds_name, method, experiment, metric), recs in sorted(curves.items()):
        pts = tuple((r.ratio, r.mean, r.std) for r in sorted(recs, key=lambda r: r.ratio))
        curve = MetricCurve(experiment=experiment, metric=metric, points=pts)
        summary_records.append(
            EvaluationRecord(
                ds_name, method, experiment, f"FSDEM_{metric}", 0.0, 0, fsdem_score(curve), 0.0, len(pts)
            )
        )
        if metric in stability_for:
            stab = fsdem_stability(curve)
            if stab is not None:  # undefined for single-point curves: reported missing
                summary_records.append(
                    EvaluationRecord(ds_name, method, experiment, f"STAB_{metric}", 0.0, 0, stab, 0.0, len(pts))
                )
    records.extend(summary_records)
    records.sort(key=lambda r: (r.dataset, r.method, r.experiment, r.metric, r.ratio))

    manifest = {
        "artifact": "fsbench",
        "version": __version__,
        "base_seed": config.base_seed,
        "config": {
            "output_dir": config.output_dir,
            "cv": config.cv,
            "avg_steps": config.avg_steps,
            "supervised_iter": config.supervised_iter,
            "unsupervised_iter": config.unsupervised_iter,
            "eval_type": list(config.eval_type),
            "metrics": list(config.metrics),
            "stability": config.stability if isinstance(config.stability, bool) else list(config.stability),
            "experiments": list(config.experiments),
            "save_all": config.save_all,
            "workers": config.workers,
        },
        "datasets": [
            {"name": d.name, "n_instances": d.n_instances, "n_features": d.n_features, "n_classes": d.n_classes}
            for d in datasets
        ],
        "methods": [{"name": m.name, "kind": m.kind, "stochastic": m.stochastic} for m in methods],
        "metrics": [
            {"name": m, "higher_is_better": _orientation(m, custom_metrics)} for m in all_metrics
        ],
        "experiments": list(config.experiments),
        "failures": failures,
    }

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_results_csv(records, out_dir / "results.csv")
    if config.save_all:
        write_runs_csv(run_rows, out_dir / "runs.csv")
    _atomic_write(out_dir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    return RunResult(records=records, run_rows=run_rows, manifest=manifest, failures=failures, output_dir=out_dir)


def _orientation(metric: str, custom_metrics=()):
    if metric in BUILTIN_METRICS:
        return BUILTIN_METRICS[metric][0]
    for cm in custom_metrics:
        if cm.name == metric:
            return cm.higher_is_better
    return True


# ---------------------------------------------------------------------------
# runtime stress-testing
# ---------------------------------------------------------------------------


def timer(config: RunConfig, methods, vary_param: str = "both", time_limit: float = 3600.0) -> list:
    """Measure selector runtime over growing synthetic stress grids.

    The features axis fixes 500 instances and sweeps the feature counts;
    the instances axis fixes 100 features and sweeps the instance
    counts. Each point records the median wall-clock of 3 single
    rank_features calls, measured strictly serially. A call exceeding
    time_limit marks the point timed out and skips all larger sizes on
    that axis for that method.
    """
    if time_limit <= 0:
        raise RunnerError("time_limit must be > 0")
    if vary_param not in ("features", "instances", "both"):
        raise RunnerError("vary_param must be features|instances|both")
    axes = []
    if vary_param in ("features", "both"):
        axes.append(("features", [(500, d) for d in TIMER_FEATURE_SIZES]))
    if vary_param in ("instances", "both"):
        axes.append(("instances", [(n, 100) for n in TIMER_INSTANCE_SIZES]))

    records = []
    for spec in methods:
        for axis, sizes in axes:
            for n_inst, n_feat in sizes:
                ds_seed = derive_seed(config.base_seed, ("timer", axis, f"{n_inst}x{n_feat}"), 0)
                ds = make_synthetic(n_inst, n_feat, min(10, n_feat), 2, ds_seed, name=f"timer_{axis}_{n_inst}x{n_feat}")
                durations = []
                timed_out = False
                for r in range(3):
                    seed = derive_seed(config.base_seed, ("timer", axis, f"{n_inst}x{n_feat}", spec.name), r)
                    t0 = time.perf_counter()
                    rank_features(spec, ds, seed)
                    elapsed = time.perf_counter() - t0
                    durations.append(elapsed)
                    if elapsed > time_limit:
                        timed_out = True
                        break
                seconds = durations[-1] if timed_out else statistics.median(durations)
                records.append(TimingRecord(spec.name, axis, n_inst, n_feat, seconds, timed_out))
                if timed_out:
                    break  # larger sizes on this axis are skipped
    return records


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------


def _atomic_write(path: Path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _record_fields(rec: EvaluationRecord):
    return (
        rec.dataset,
        rec.method,
        rec.experiment,
        rec.metric,
        f"{rec.ratio:.4f}",
        str(rec.n_features),
        f"{rec.mean:.6g}",
        f"{rec.std:.6g}",
        str(rec.n_runs),
    )


def write_results_csv(records, path):
    lines = [",".join(RESULTS_HEADER)]
    lines += [",".join(_record_fields(r)) for r in records]
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def write_runs_csv(run_rows, path):
    lines = [",".join(RUNS_HEADER)]
    for rec, rep, seed, value in run_rows:
        lines.append(",".join(_record_fields(rec) + (str(rep), str(seed), f"{value:.6g}")))
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def write_timings_csv(records, path):
    lines = [",".join(TIMINGS_HEADER)]
    for r in records:
        lines.append(
            f"{r.method},{r.axis},{r.n_instances},{r.n_features},{r.seconds:.6g},{str(r.timed_out).lower()}"
        )
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def read_results_csv(path) -> list:
    """Parse results.csv back into row dicts; raises on schema mismatch."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_results_rows(text)


def parse_results_rows(text: str) -> list:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or tuple(lines[0].split(",")) != RESULTS_HEADER:
        raise RunnerError(f"results data must start with header {','.join(RESULTS_HEADER)!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        rows.append(_parse_results_line(line, lineno))
    return rows


def _parse_results_line(line: str, lineno: int) -> dict:
    parts = line.split(",")
    if len(parts) != len(RESULTS_HEADER):
        raise RunnerError(f"line {lineno}: expected {len(RESULTS_HEADER)} columns, got {len(parts)}")
    try:
        row = {
            "dataset": parts[0],
            "method": parts[1],
            "experiment": parts[2],
            "metric": parts[3],
            "ratio": float(parts[4]),
            "n_features": int(parts[5]),
            "mean": float(parts[6]),
            "std": float(parts[7]),
            "n_runs": int(parts[8]),
        }
    except ValueError as exc:
        raise RunnerError(f"line {lineno}: {exc}") from None
    if not (np.isfinite(row["mean"]) and np.isfinite(row["std"])):
        raise RunnerError(f"line {lineno}: non-finite mean/std")
    return row


def read_timings_csv(path) -> list:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or tuple(lines[0].split(",")) != TIMINGS_HEADER:
        raise RunnerError(f"timings file must start with header {','.join(TIMINGS_HEADER)!r}")
    records = []
    for line in lines[1:]:
        parts = line.split(",")
        records.append(
            TimingRecord(
                method=parts[0],
                axis=parts[1],
                n_instances=int(parts[2]),
                n_features=int(parts[3]),
                seconds=float(parts[4]),
                timed_out=parts[5] == "true",
            )
        )
    return records
