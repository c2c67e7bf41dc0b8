"""Read-only JSON API over a persisted results bundle.

Serves the dashboard's static assets plus /api endpoints that expose
manifest, metric curves, curve summaries, rank analysis, and timings.
Session-scoped imports are merged in memory only; files under the
results directory are never mutated.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

import numpy as np

from .metrics import BUILTIN_METRICS
from .rankstats import RankStatsError, build_score_table, latex_rank_table, latex_score_table, rank_analysis
from .runner import RESULTS_HEADER, RunnerError, _parse_results_line, read_results_csv, read_timings_csv


class ApiError(ValueError):
    """Maps to a 400-class HTTP response."""


class ResultsStore:
    """In-memory view of a results bundle plus session-scoped imported rows."""

    def __init__(self, results_dir):
        self.results_dir = Path(results_dir)
        results_path = self.results_dir / "results.csv"
        if not results_path.is_file():
            raise RunnerError(f"no results.csv under {self.results_dir}")
        self.base_rows = read_results_csv(results_path)
        manifest_path = self.results_dir / "manifest.json"
        self.manifest = json.loads(manifest_path.read_text(encoding="utf-8")) if manifest_path.is_file() else {}
        timings_path = self.results_dir / "timings.csv"
        self.timing_records = read_timings_csv(timings_path) if timings_path.is_file() else []
        self.imported_rows: list = []
        self._import_lock = threading.Lock()

    # -- row access ---------------------------------------------------------

    def all_rows(self) -> list:
        return self.base_rows + self.imported_rows

    def _filtered_rows(self, exclude) -> list:
        # exclusion names may be methods or datasets; the namespaces are
        # distinct so one list filters both
        excluded = set(exclude)
        return [r for r in self.all_rows() if r["method"] not in excluded and r["dataset"] not in excluded]

    def orientation(self, metric: str) -> bool:
        base = metric
        for prefix in ("FSDEM_", "STAB_"):
            if metric.startswith(prefix):
                base = metric[len(prefix):]
        for entry in self.manifest.get("metrics", []):
            if entry.get("name") == base:
                return bool(entry.get("higher_is_better", True))
        if base in BUILTIN_METRICS:
            return BUILTIN_METRICS[base][0]
        return True

    # -- views --------------------------------------------------------------

    def manifest_view(self) -> dict:
        rows = self.all_rows()
        datasets = sorted({r["dataset"] for r in rows})
        methods = sorted({r["method"] for r in rows})
        experiments = sorted({r["experiment"] for r in rows})
        metric_names = sorted(
            {r["metric"] for r in rows if not r["metric"].startswith(("FSDEM_", "STAB_"))}
        )
        return {
            "datasets": datasets,
            "methods": methods,
            "metrics": [{"name": m, "orientation": "higher" if self.orientation(m) else "lower"} for m in metric_names],
            "experiments": experiments,
        }

    def curves(self, metric: str, experiment: str, dataset=None, exclude=()) -> dict:
        rows = [
            r
            for r in self._filtered_rows(exclude)
            if r["metric"] == metric
            and r["experiment"] == experiment
            and (dataset is None or r["dataset"] == dataset)
        ]
        if not rows:
            raise ApiError(f"no curve rows for metric={metric} experiment={experiment}")
        by_method: dict = {}
        for r in rows:
            by_method.setdefault(r["method"], []).append(r)
        curves = []
        for method in sorted(by_method):
            mrows = by_method[method]
            datasets = sorted({r["dataset"] for r in mrows})
            if len(datasets) == 1:
                points = [
                    {"ratio": r["ratio"], "n_features": r["n_features"], "mean": r["mean"], "std": r["std"]}
                    for r in sorted(mrows, key=lambda r: r["ratio"])
                ]
            else:
                # aggregate across datasets: mean of cell means, pooled std
                by_ratio: dict = {}
                for r in mrows:
                    by_ratio.setdefault(r["ratio"], []).append(r)
                points = [
                    {
                        "ratio": ratio,
                        "n_features": None,
                        "mean": float(np.mean([r["mean"] for r in grp])),
                        "std": float(np.sqrt(np.mean([r["std"] ** 2 for r in grp]))),
                    }
                    for ratio, grp in sorted(by_ratio.items())
                ]
            curves.append({"method": method, "datasets": datasets, "points": points})
        return {
            "metric": metric,
            "experiment": experiment,
            "orientation": "higher" if self.orientation(metric) else "lower",
            "curves": curves,
        }

    def fsdem_table(self, experiment: str, exclude=()) -> dict:
        cells: dict = {}
        for r in self._filtered_rows(exclude):
            if r["experiment"] != experiment:
                continue
            for prefix, slot in (("FSDEM_", "fsdem"), ("STAB_", "stability")):
                if r["metric"].startswith(prefix):
                    key = (r["dataset"], r["method"], r["metric"][len(prefix):])
                    cells.setdefault(key, {})[slot] = r["mean"]
        rows = [
            {
                "dataset": ds,
                "method": method,
                "metric": metric,
                "fsdem": vals.get("fsdem"),
                "stability": vals.get("stability"),
            }
            for (ds, method, metric), vals in sorted(cells.items())
        ]
        if not rows:
            raise ApiError(f"no curve summaries for experiment={experiment}")
        return {"experiment": experiment, "rows": rows}

    def rank_summary(self, metric: str, experiment: str, stat: str = "standard", alpha: float = 0.05, exclude=()):
        """Score table and rank summary for FSDEM_<metric>; the single
        computation path behind /api/ranks, cmd_ranks, and the exports."""
        try:
            table = build_score_table(
                self._filtered_rows(exclude),
                metric=f"FSDEM_{metric}",
                experiment=experiment,
                higher_is_better=self.orientation(metric),
                exclude=exclude,
            )
            return table, rank_analysis(table, stat_family=stat, alpha=alpha)
        except RankStatsError as exc:
            raise ApiError(str(exc)) from None

    def ranks(self, metric: str, experiment: str, stat: str = "standard", alpha: float = 0.05, exclude=()) -> dict:
        table, summary = self.rank_summary(metric, experiment, stat=stat, alpha=alpha, exclude=exclude)
        return {
            "metric": metric,
            "experiment": experiment,
            "stat": summary.stat_family,
            "alpha": summary.alpha,
            "n_datasets": summary.n_datasets,
            "methods": list(summary.methods),
            "avg_ranks": {m: summary.avg_ranks[j] for j, m in enumerate(summary.methods)},
            "friedman_stat": summary.friedman_stat,
            "cd_value": summary.cd_value,
            "cliques": [list(c) for c in summary.cliques],
            "dropped_datasets": list(table.dropped_datasets),
        }

    def timings(self, axis: str) -> dict:
        if axis not in ("features", "instances"):
            raise ApiError("axis must be features|instances")
        rows = [
            {
                "method": t.method,
                "axis": t.axis,
                "n_instances": t.n_instances,
                "n_features": t.n_features,
                "seconds": t.seconds,
                "timed_out": t.timed_out,
            }
            for t in self.timing_records
            if t.axis == axis
        ]
        return {"axis": axis, "rows": rows}

    def latex(self, kind: str, metric: str, experiment: str, stat: str = "standard", alpha: float = 0.05, exclude=()) -> str:
        if kind == "ranks":
            _, summary = self.rank_summary(metric, experiment, stat=stat, alpha=alpha, exclude=exclude)
            return latex_rank_table(summary)
        if kind == "fsdem":
            table, _ = self.rank_summary(metric, experiment, stat=stat, alpha=alpha, exclude=exclude)
            title = f"Curve summaries of {metric}, {experiment}"
            return latex_score_table(table.methods, table.datasets, table.values, title)
        raise ApiError("kind must be ranks|fsdem")

    def import_rows(self, text: str) -> dict:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or tuple(lines[0].split(",")) != RESULTS_HEADER:
            raise ApiError(f"import body must start with header {','.join(RESULTS_HEADER)!r}")
        accepted = []
        rejected = []
        for lineno, line in enumerate(lines[1:], start=2):
            try:
                accepted.append(_parse_results_line(line, lineno))
            except RunnerError as exc:
                rejected.append({"line": lineno, "error": str(exc)})
        with self._import_lock:
            self.imported_rows.extend(accepted)
        return {"accepted_rows": len(accepted), "rejected_rows": rejected}


# ---------------------------------------------------------------------------
# HTTP layer
# ---------------------------------------------------------------------------

_FALLBACK_INDEX = """<!DOCTYPE html>
<html><head><title>fsbench results API</title></head>
<body><h1>fsbench results API</h1>
<p>No dashboard build found. Available endpoints:</p>
<ul>
<li>GET /api/manifest</li>
<li>GET /api/curves?metric=&amp;experiment=[&amp;dataset=][&amp;exclude=a,b]</li>
<li>GET /api/fsdem?experiment=[&amp;exclude=]</li>
<li>GET /api/ranks?metric=&amp;experiment=&amp;stat=[&amp;alpha=][&amp;exclude=]</li>
<li>GET /api/timings?axis=features|instances</li>
<li>GET /api/export/latex?kind=ranks|fsdem&amp;metric=&amp;experiment=&amp;stat=</li>
<li>POST /api/import (text/csv, results.csv schema)</li>
<li>GET /api/download/results | /api/download/timings</li>
</ul></body></html>
"""


class _Handler(BaseHTTPRequestHandler):
    store: ResultsStore = None
    static_dir: Path = None

    def log_message(self, fmt, *args):  # quiet by default
        pass

    # -- helpers -------------------------------------------------------------

    def _send(self, code: int, body: bytes, content_type: str):
        self.send_response(code)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        if not getattr(self, "_head_only", False):
            self.wfile.write(body)

    def _send_json(self, payload, code: int = 200):
        self._send(code, json.dumps(payload).encode("utf-8"), "application/json")

    def _send_error_json(self, code: int, message: str):
        self._send_json({"error": message}, code=code)

    def _query(self):
        parsed = urlparse(self.path)
        params = {k: v[-1] for k, v in parse_qs(parsed.query).items()}
        exclude = tuple(x for x in params.get("exclude", "").split(",") if x)
        return parsed.path, params, exclude

    # -- verbs ---------------------------------------------------------------

    def do_GET(self):
        path, params, exclude = self._query()
        try:
            if path == "/api/manifest":
                return self._send_json(self.store.manifest_view())
            if path == "/api/curves":
                return self._send_json(
                    self.store.curves(
                        self._require(params, "metric"),
                        self._require(params, "experiment"),
                        dataset=params.get("dataset"),
                        exclude=exclude,
                    )
                )
            if path == "/api/fsdem":
                return self._send_json(self.store.fsdem_table(self._require(params, "experiment"), exclude=exclude))
            if path == "/api/ranks":
                return self._send_json(
                    self.store.ranks(
                        self._require(params, "metric"),
                        self._require(params, "experiment"),
                        stat=params.get("stat", "standard"),
                        alpha=float(params.get("alpha", "0.05")),
                        exclude=exclude,
                    )
                )
            if path == "/api/timings":
                return self._send_json(self.store.timings(params.get("axis", "features")))
            if path == "/api/export/latex":
                text = self.store.latex(
                    params.get("kind", "ranks"),
                    metric=self._require(params, "metric"),
                    experiment=self._require(params, "experiment"),
                    stat=params.get("stat", "standard"),
                    alpha=float(params.get("alpha", "0.05")),
                    exclude=exclude,
                )
                return self._send(200, text.encode("utf-8"), "text/plain; charset=utf-8")
            if path == "/api/download/results":
                return self._send_file(self.store.results_dir / "results.csv", "text/csv")
            if path == "/api/download/timings":
                return self._send_file(self.store.results_dir / "timings.csv", "text/csv")
            if path.startswith("/api/"):
                return self._send_error_json(404, f"unknown endpoint {path}")
            return self._send_static(path)
        except ApiError as exc:
            return self._send_error_json(400, str(exc))
        except (ValueError, KeyError) as exc:
            return self._send_error_json(400, str(exc))

    def do_HEAD(self):
        # answer HEAD like GET minus the body (probes, link checkers)
        self._head_only = True
        self.do_GET()

    def do_POST(self):
        path, _, _ = self._query()
        if path != "/api/import":
            return self._send_error_json(404, f"unknown endpoint {path}")
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = self.rfile.read(length).decode("utf-8")
            return self._send_json(self.store.import_rows(body))
        except ApiError as exc:
            return self._send_error_json(400, str(exc))
        except UnicodeDecodeError:
            return self._send_error_json(400, "import body must be UTF-8 text")

    # -- static assets ---------------------------------------------------------

    def _require(self, params, key):
        if key not in params or not params[key]:
            raise ApiError(f"missing required query parameter {key!r}")
        return params[key]

    def _send_file(self, path: Path, content_type: str):
        if not path.is_file():
            return self._send_error_json(404, f"{path.name} not found in results bundle")
        self._send(200, path.read_bytes(), content_type)

    def _send_static(self, path: str):
        if path == "/":
            path = "/index.html"
        if self.static_dir is not None:
            target = (self.static_dir / path.lstrip("/")).resolve()
            if str(target).startswith(str(self.static_dir.resolve())) and target.is_file():
                ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
                return self._send(200, target.read_bytes(), ctype)
        if path == "/index.html":
            return self._send(200, _FALLBACK_INDEX.encode("utf-8"), "text/html; charset=utf-8")
        return self._send_error_json(404, f"no such file {path}")


def make_server(results_dir, port: int = 0, static_dir=None) -> ThreadingHTTPServer:
    """Build (but do not start) the results server; port 0 picks a free port."""
    store = ResultsStore(results_dir)
    handler = type(
        "BoundHandler",
        (_Handler,),
        {"store": store, "static_dir": Path(static_dir) if static_dir else None},
    )
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve(results_dir, port: int, static_dir=None):
    """Serve the results bundle until interrupted."""
    httpd = make_server(results_dir, port, static_dir)
    host, bound_port = httpd.server_address
    # flush so wrappers watching a pipe see the bound port immediately
    print(f"serving results from {results_dir} on http://{host}:{bound_port}/", flush=True)
    try:
        httpd.serve_forever()
    finally:
        httpd.server_close()
