"""Cross-dataset method comparison via rank statistics.

Standard Friedman ranks with the Nemenyi critical difference, plus a
magnitude-aware variant where per-dataset ranks reflect min-max
normalized score gaps instead of order alone. Emits critical-difference
diagrams as SVG and rank tables as LaTeX.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata


class RankStatsError(ValueError):
    """A rank-statistics request violated its contract."""


# Critical values for the two-tailed Nemenyi test (studentized range
# statistic divided by sqrt(2)), indexed by the number of methods k.
NEMENYI_Q = {
    0.05: {
        2: 1.960, 3: 2.343, 4: 2.569, 5: 2.728, 6: 2.850, 7: 2.949, 8: 3.031,
        9: 3.102, 10: 3.164, 11: 3.219, 12: 3.268, 13: 3.313, 14: 3.354,
        15: 3.391, 16: 3.426, 17: 3.458, 18: 3.489, 19: 3.517, 20: 3.544,
    },
    0.10: {
        2: 1.645, 3: 2.052, 4: 2.291, 5: 2.459, 6: 2.589, 7: 2.693, 8: 2.780,
        9: 2.855, 10: 2.920, 11: 2.978, 12: 3.030, 13: 3.077, 14: 3.120,
        15: 3.159, 16: 3.196, 17: 3.230, 18: 3.261, 19: 3.291, 20: 3.319,
    },
}


@dataclass(frozen=True)
class ScoreTable:
    """One scalar score per (dataset, method), plus orientation.

    Datasets with any missing method cell are excluded at construction
    (listwise deletion) and listed in dropped_datasets.
    """

    methods: tuple
    datasets: tuple
    values: np.ndarray  # shape (n_datasets, n_methods)
    higher_is_better: bool
    dropped_datasets: tuple = ()

    def __post_init__(self):
        if len(self.methods) < 2:
            raise RankStatsError("score table needs at least 2 methods")
        if len(self.datasets) < 2:
            raise RankStatsError("score table needs at least 2 complete datasets")
        if self.values.shape != (len(self.datasets), len(self.methods)):
            raise RankStatsError("score table shape mismatch")


@dataclass(frozen=True)
class RankSummary:
    """Average ranks, Friedman statistic, and Nemenyi CD for one statistic family."""

    stat_family: str  # "standard" | "mars"
    methods: tuple
    avg_ranks: np.ndarray
    friedman_stat: float
    cd_value: float
    alpha: float
    n_datasets: int
    cliques: tuple  # tuples of method names, each a maximal indistinguishable group


def build_score_table(rows, metric: str, experiment: str, higher_is_better: bool, exclude=()) -> ScoreTable:
    """Pivot long-format result rows into a (dataset x method) score table.

    rows are mappings with at least dataset/method/experiment/metric/mean
    keys; exactly one row per (dataset, method) is expected for the given
    metric and experiment. Incomplete datasets are dropped.
    """
    excluded = set(exclude)
    cells: dict = {}
    methods: list = []
    datasets: list = []
    for row in rows:
        if row["metric"] != metric or row["experiment"] != experiment:
            continue
        if row["method"] in excluded:
            continue
        if row["method"] not in methods:
            methods.append(row["method"])
        if row["dataset"] not in datasets:
            datasets.append(row["dataset"])
        cells[(row["dataset"], row["method"])] = float(row["mean"])
    if not cells:
        raise RankStatsError(f"no rows for metric {metric!r} and experiment {experiment!r}")
    if len(methods) < 2:
        raise RankStatsError("fewer than 2 methods after exclusion")
    complete = [ds for ds in datasets if all((ds, m) in cells for m in methods)]
    dropped = tuple(ds for ds in datasets if ds not in complete)
    if len(complete) < 2:
        raise RankStatsError("fewer than 2 complete datasets")
    values = np.array([[cells[(ds, m)] for m in methods] for ds in complete], dtype=np.float64)
    return ScoreTable(
        methods=tuple(methods),
        datasets=tuple(complete),
        values=values,
        higher_is_better=higher_is_better,
        dropped_datasets=dropped,
    )


def standard_ranks(table: ScoreTable) -> np.ndarray:
    """Per-dataset fractional ranks: best score gets rank 1, ties averaged."""
    if not np.all(np.isfinite(table.values)):
        raise RankStatsError("score table has non-finite cells")
    oriented = -table.values if table.higher_is_better else table.values
    return np.vstack([rankdata(row) for row in oriented])


def mars_ranks(table: ScoreTable) -> np.ndarray:
    """Magnitude-aware ranks: 1 + (k-1) * (1 - s), s the min-max normalized score.

    Scores are normalized per dataset row and oriented so 1 = best; a
    constant row normalizes to all-best (every rank 1).
    """
    if not np.all(np.isfinite(table.values)):
        raise RankStatsError("score table has non-finite cells")
    k = len(table.methods)
    ranks = np.empty_like(table.values)
    for i, row in enumerate(table.values):
        lo, hi = row.min(), row.max()
        if hi == lo:
            s = np.ones_like(row)
        elif table.higher_is_better:
            s = (row - lo) / (hi - lo)
        else:
            s = (hi - row) / (hi - lo)
        ranks[i] = 1.0 + (k - 1) * (1.0 - s)
    return ranks


def friedman_nemenyi(ranks: np.ndarray, methods, alpha: float = 0.05, stat_family: str = "standard") -> RankSummary:
    """Friedman statistic, Nemenyi critical difference, and cliques.

    cliques are maximal runs of methods (sorted by average rank) whose
    rank span is below the critical difference; only groups of 2+ are
    reported.
    """
    ranks = np.asarray(ranks, dtype=np.float64)
    n, k = ranks.shape
    if n < 2 or k < 2:
        raise RankStatsError("need at least 2 datasets and 2 methods")
    if len(methods) != k:
        raise RankStatsError("method list does not match rank matrix width")
    if alpha not in NEMENYI_Q:
        raise RankStatsError(f"alpha must be one of {sorted(NEMENYI_Q)}")
    if k not in NEMENYI_Q[alpha]:
        raise RankStatsError(f"critical values tabulated only for 2 <= k <= 20, got k={k}")
    avg = ranks.mean(axis=0)
    # sum-of-squares around the mean average rank; for standard ranks the
    # mean is (k+1)/2 and this reduces to the classic sum(R^2) - k(k+1)^2/4,
    # but it stays non-negative for magnitude-aware ranks whose rows do not
    # sum to k(k+1)/2
    friedman = 12.0 * n / (k * (k + 1)) * float(np.sum((avg - avg.mean()) ** 2))
    cd = NEMENYI_Q[alpha][k] * math.sqrt(k * (k + 1) / (6.0 * n))

    order = sorted(range(k), key=lambda j: (avg[j], j))
    cliques = []
    for i in range(k):
        j = i
        while j + 1 < k and avg[order[j + 1]] - avg[order[i]] < cd:
            j += 1
        if j > i:
            cliques.append(tuple(methods[order[t]] for t in range(i, j + 1)))
    # keep only maximal runs
    maximal = tuple(c for c in cliques if not any(set(c) < set(o) for o in cliques))
    return RankSummary(
        stat_family=stat_family,
        methods=tuple(methods),
        avg_ranks=avg,
        friedman_stat=float(friedman),
        cd_value=float(cd),
        alpha=alpha,
        n_datasets=n,
        cliques=maximal,
    )


def rank_analysis(table: ScoreTable, stat_family: str = "standard", alpha: float = 0.05) -> RankSummary:
    """Rank a score table with the chosen statistic family."""
    if stat_family == "standard":
        ranks = standard_ranks(table)
    elif stat_family == "mars":
        ranks = mars_ranks(table)
    else:
        raise RankStatsError(f"stat family must be standard|mars, got {stat_family!r}")
    return friedman_nemenyi(ranks, table.methods, alpha=alpha, stat_family=stat_family)


# ---------------------------------------------------------------------------
# export: LaTeX tables and CD-diagram SVG
# ---------------------------------------------------------------------------


def _tex_escape(text: str) -> str:
    for ch in ("\\", "&", "%", "$", "#", "_", "{", "}"):
        text = text.replace(ch, "\\" + ch)
    return text


def latex_rank_table(summary: RankSummary) -> str:
    """Average-rank table with the Friedman statistic and CD in the caption line."""
    order = np.argsort(summary.avg_ranks, kind="stable")
    lines = [
        "\\begin{tabular}{lr}",
        "\\hline",
        "Method & Avg.\\ rank \\\\",
        "\\hline",
    ]
    for j in order:
        lines.append(f"{_tex_escape(summary.methods[j])} & {summary.avg_ranks[j]:.4f} \\\\")
    lines += [
        "\\hline",
        f"\\multicolumn{{2}}{{l}}{{Friedman $\\chi^2_F$ = {summary.friedman_stat:.4f}, "
        f"CD($\\alpha$={summary.alpha:g}) = {summary.cd_value:.4f}, N = {summary.n_datasets}}} \\\\",
        "\\hline",
        "\\end{tabular}",
    ]
    return "\n".join(lines) + "\n"


def latex_score_table(methods, datasets, values: np.ndarray, title: str) -> str:
    """Dataset-by-method score table (used for curve-summary exports)."""
    cols = "l" + "r" * len(methods)
    lines = [
        f"% {title}",
        f"\\begin{{tabular}}{{{cols}}}",
        "\\hline",
        "Dataset & " + " & ".join(_tex_escape(m) for m in methods) + " \\\\",
        "\\hline",
    ]
    for i, ds in enumerate(datasets):
        cells = " & ".join(f"{values[i, j]:.4f}" for j in range(len(methods)))
        lines.append(f"{_tex_escape(ds)} & {cells} \\\\")
    lines += ["\\hline", "\\end{tabular}"]
    return "\n".join(lines) + "\n"


def cd_diagram_svg(summary: RankSummary, width: int = 720) -> str:
    """Render a critical-difference diagram: a rank axis, one marker per
    method with its label, and bars joining statistically indistinguishable
    groups."""
    k = len(summary.methods)
    margin = 150.0
    axis_y = 80.0
    span = width - 2 * margin

    def x_of(rank: float) -> float:
        if k == 1:
            return margin
        return margin + (rank - 1.0) / (k - 1.0) * span

    order = sorted(range(k), key=lambda j: (summary.avg_ranks[j], j))
    parts = []
    parts.append('<g font-family="sans-serif" font-size="12">')
    # axis with integer ticks
    parts.append(
        f'<line x1="{margin:.1f}" y1="{axis_y:.1f}" x2="{margin + span:.1f}" y2="{axis_y:.1f}" '
        'stroke="black" stroke-width="1.5"/>'
    )
    for tick in range(1, k + 1):
        tx = x_of(tick)
        parts.append(
            f'<line x1="{tx:.1f}" y1="{axis_y - 5:.1f}" x2="{tx:.1f}" y2="{axis_y:.1f}" stroke="black"/>'
        )
        parts.append(f'<text x="{tx:.1f}" y="{axis_y - 10:.1f}" text-anchor="middle">{tick}</text>')
    # CD ruler
    if k > 1:
        cd_px = summary.cd_value / (k - 1.0) * span
        parts.append(
            f'<line x1="{margin:.1f}" y1="30" x2="{margin + cd_px:.1f}" y2="30" stroke="black" stroke-width="2"/>'
        )
        parts.append(f'<text x="{margin:.1f}" y="22">CD = {summary.cd_value:.4f}</text>')
    # clique bars below the axis
    bar_y = axis_y + 12.0
    for clique in summary.cliques:
        ranks = [summary.avg_ranks[summary.methods.index(m)] for m in clique]
        parts.append(
            f'<line x1="{x_of(min(ranks)) - 3:.1f}" y1="{bar_y:.1f}" x2="{x_of(max(ranks)) + 3:.1f}" '
            f'y2="{bar_y:.1f}" stroke="black" stroke-width="4"/>'
        )
        bar_y += 9.0
    # method stems and labels, best half to the left, rest to the right
    label_y = bar_y + 16.0
    half = (k + 1) // 2
    for pos, j in enumerate(order):
        rank = summary.avg_ranks[j]
        rx = x_of(rank)
        if pos < half:
            ly = label_y + pos * 18.0
            lx = margin - 10.0
            anchor = "end"
        else:
            ly = label_y + (k - 1 - pos) * 18.0
            lx = margin + span + 10.0
            anchor = "start"
        parts.append(
            f'<polyline points="{rx:.1f},{axis_y:.1f} {rx:.1f},{ly:.1f} {lx:.1f},{ly:.1f}" '
            'fill="none" stroke="black"/>'
        )
        tx = lx - 4.0 if anchor == "end" else lx + 4.0
        parts.append(
            f'<text x="{tx:.1f}" y="{ly + 4:.1f}" text-anchor="{anchor}">'
            f"{summary.methods[j]} ({rank:.3f})</text>"
        )
    parts.append("</g>")
    height = label_y + half * 18.0 + 20.0
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height:.0f}" '
        f'viewBox="0 0 {width} {height:.0f}">\n' + "\n".join(parts) + "\n</svg>\n"
    )
    return svg
