"""Command-line entry point: run, timer, ranks, export, serve, make-data.

Run and timer configurations are JSON files mirroring RunConfig plus
dataset paths and method names, e.g.::

    {
      "cv": 5, "avg_steps": 10, "base_seed": 7,
      "metrics": ["ACC", "AUC", "CLSACC", "NMI", "AAD"],
      "experiments": ["10Percent", "100Percent"],
      "classifier": {"n_trees": 100},
      "datasets": [
        {"path": "data/colon.csv", "name": "colon"},
        {"synthetic": {"name": "syn1", "n_instances": 100, "n_features": 50,
                       "n_informative": 10, "n_classes": 2, "seed": 1}}
      ],
      "methods": ["Random", "Variance_Baseline"]
    }

Exit codes for run: 0 success, 2 partial failures (failed cells are
recorded in manifest.json), 1 fatal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .datasets import DatasetError, load_dataset, make_synthetic, write_dataset
from .learners import LearnerError
from .metrics import MetricError
from .rankstats import cd_diagram_svg
from .runner import (
    ForestClassifier,
    RunConfig,
    RunnerError,
    run,
    timer,
    write_timings_csv,
)
from .selection import SelectionError, get_selector, subprocess_selector
from .server import ApiError, ResultsStore, serve

_CONFIG_KEYS = {
    "output_dir", "cv", "avg_steps", "supervised_iter", "unsupervised_iter",
    "eval_type", "metrics", "stability", "experiments", "save_all",
    "base_seed", "workers", "classifier", "datasets", "methods",
}

_FATAL = (RunnerError, DatasetError, SelectionError, MetricError, LearnerError, ApiError, OSError, ValueError)


class ConfigError(ValueError):
    pass


def _load_config(path):
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return raw


def _build_methods(raw):
    methods = []
    for entry in raw.get("methods", []):
        if isinstance(entry, str):
            methods.append(get_selector(entry))
        elif isinstance(entry, dict) and "command" in entry:
            methods.append(
                subprocess_selector(
                    entry["name"],
                    entry["command"],
                    kind=entry.get("kind", entry.get("type", "unsupervised")),
                    stochastic=bool(entry.get("stochastic", False)),
                )
            )
        else:
            raise ConfigError(f"method entry must be a built-in name or a command spec: {entry!r}")
    if not methods:
        raise ConfigError("config must list at least one method")
    return methods


def _build_datasets(raw):
    datasets = []
    for entry in raw.get("datasets", []):
        if "synthetic" in entry:
            params = dict(entry["synthetic"])
            name = params.pop("name", None)
            datasets.append(make_synthetic(**params, name=name))
        elif "path" in entry:
            datasets.append(load_dataset(entry["path"], entry.get("name", Path(entry["path"]).stem)))
        else:
            raise ConfigError(f"dataset entry needs 'path' or 'synthetic': {entry!r}")
    if not datasets:
        raise ConfigError("config must list at least one dataset")
    return datasets


def _build_run_config(raw, args):
    fields = {k: raw[k] for k in raw if k in RunConfig.__dataclass_fields__}
    for key in ("eval_type", "metrics", "experiments"):
        if key in fields:
            fields[key] = tuple(fields[key])
    if getattr(args, "out", None):
        fields["output_dir"] = args.out
    if getattr(args, "seed", None) is not None:
        fields["base_seed"] = args.seed
    if getattr(args, "workers", None):
        fields["workers"] = args.workers
    return RunConfig(**fields)


def cmd_run(args) -> int:
    raw = _load_config(args.config)
    methods = _build_methods(raw)  # unknown method names fail before any output
    config = _build_run_config(raw, args)
    classifier = ForestClassifier(**raw.get("classifier", {}))
    datasets = _build_datasets(raw)
    result = run(config, datasets, methods, classifier=classifier)
    print(f"wrote {result.output_dir / 'results.csv'} ({len(result.records)} rows)")
    if result.failures:
        print(f"{len(result.failures)} cell(s) failed; see manifest.json", file=sys.stderr)
        return 2
    return 0


def cmd_timer(args) -> int:
    raw = _load_config(args.config)
    methods = _build_methods(raw)
    config = _build_run_config(raw, args)
    records = timer(config, methods, vary_param=args.vary, time_limit=args.time_limit)
    out_dir = Path(args.out or config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_timings_csv(records, out_dir / "timings.csv")
    print(f"wrote {out_dir / 'timings.csv'} ({len(records)} measurements)")
    return 0


def _print_rank_report(payload):
    print(f"Rank analysis ({payload['stat']}) for {payload['metric']}, {payload['experiment']}")
    print(f"N = {payload['n_datasets']} datasets, alpha = {payload['alpha']:g}")
    width = max(len(m) for m in payload["methods"]) + 2
    for method, rank in sorted(payload["avg_ranks"].items(), key=lambda kv: kv[1]):
        print(f"  {method:<{width}} {rank:.4f}")
    print(f"Friedman statistic = {payload['friedman_stat']:.4f}")
    print(f"Critical difference = {payload['cd_value']:.4f}")
    if payload["cliques"]:
        for clique in payload["cliques"]:
            print("  indistinguishable: " + ", ".join(clique))
    else:
        print("  all methods separated")
    if payload["dropped_datasets"]:
        print("dropped incomplete datasets: " + ", ".join(payload["dropped_datasets"]))


def cmd_ranks(args) -> int:
    store = ResultsStore(args.results)
    exclude = tuple(x for x in (args.exclude or "").split(",") if x)
    payload = store.ranks(args.metric, args.experiment, stat=args.stat, alpha=args.alpha, exclude=exclude)
    if args.format == "latex":
        sys.stdout.write(store.latex("ranks", args.metric, args.experiment, stat=args.stat, alpha=args.alpha, exclude=exclude))
    else:
        _print_rank_report(payload)
    if args.cd_svg:
        _, summary = store.rank_summary(args.metric, args.experiment, stat=args.stat, alpha=args.alpha, exclude=exclude)
        Path(args.cd_svg).write_text(cd_diagram_svg(summary), encoding="utf-8")
        print(f"wrote {args.cd_svg}")
    return 0


def cmd_export(args) -> int:
    store = ResultsStore(args.results)
    exclude = tuple(x for x in (args.exclude or "").split(",") if x)
    sys.stdout.write(
        store.latex(args.kind, args.metric, args.experiment, stat=args.stat, alpha=args.alpha, exclude=exclude)
    )
    if args.cd_svg:
        _, summary = store.rank_summary(args.metric, args.experiment, stat=args.stat, alpha=args.alpha, exclude=exclude)
        Path(args.cd_svg).write_text(cd_diagram_svg(summary), encoding="utf-8")
    return 0


def cmd_serve(args) -> int:
    serve(args.results, args.port, static_dir=args.static)
    return 0


def cmd_make_data(args) -> int:
    ds = make_synthetic(
        args.instances, args.features, args.informative, args.classes, args.seed, name=args.name
    )
    write_dataset(ds, args.out)
    print(f"wrote {args.out} ({ds.n_instances}x{ds.n_features}, {ds.n_classes} classes)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fsbench", description="Feature-selection evaluation harness")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("run", help="run the full evaluation described by a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="override the config's output_dir")
    p.add_argument("--seed", type=int, help="override the config's base_seed")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("timer", help="stress-test selector runtime on synthetic grids")
    p.add_argument("--config", required=True)
    p.add_argument("--vary", choices=["features", "instances", "both"], default="both")
    p.add_argument("--time-limit", type=float, default=3600.0)
    p.add_argument("--out", help="override the config's output_dir")
    p.add_argument("--seed", type=int)
    p.set_defaults(fn=cmd_timer)

    p = sub.add_parser("ranks", help="rank methods across datasets from a results bundle")
    p.add_argument("--results", required=True)
    p.add_argument("--metric", required=True)
    p.add_argument("--experiment", required=True)
    p.add_argument("--stat", choices=["standard", "mars"], default="standard")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--exclude", help="comma-separated method names to drop")
    p.add_argument("--format", choices=["text", "latex"], default="text")
    p.add_argument("--cd-svg", dest="cd_svg", help="write a critical-difference diagram SVG here")
    p.set_defaults(fn=cmd_ranks)

    p = sub.add_parser("export", help="emit LaTeX tables (and CD diagram SVG) from a results bundle")
    p.add_argument("--results", required=True)
    p.add_argument("--kind", choices=["ranks", "fsdem"], default="ranks")
    p.add_argument("--metric", required=True)
    p.add_argument("--experiment", required=True)
    p.add_argument("--stat", choices=["standard", "mars"], default="standard")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--exclude")
    p.add_argument("--cd-svg", dest="cd_svg")
    p.set_defaults(fn=cmd_export)

    p = sub.add_parser("serve", help="serve the dashboard and the JSON results API")
    p.add_argument("--results", required=True)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--static", help="directory of built dashboard assets")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("make-data", help="export a synthetic dataset CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--features", type=int, default=50)
    p.add_argument("--informative", type=int, default=10)
    p.add_argument("--classes", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name")
    p.set_defaults(fn=cmd_make_data)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, *_FATAL) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
