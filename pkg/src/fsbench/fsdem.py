"""Collapse a metric curve over the ratio grid into a single score.

The curve score rewards both level and trend: it is the curve mean plus
the ordinary-least-squares slope of the metric against the grid
position rescaled to [0, 1]. The companion stability score measures how
smoothly the metric evolves: 1 minus the sample std of the first
differences, clamped to [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class CurveError(ValueError):
    """A metric curve violated its contract."""


class CurvePoint(NamedTuple):
    ratio: float
    mean: float
    std: float


@dataclass(frozen=True)
class MetricCurve:
    """One metric's (ratio, mean, std) trajectory over a grid experiment."""

    experiment: str
    metric: str
    points: tuple

    def __post_init__(self):
        ratios = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(ratios, ratios[1:])):
            raise CurveError("curve ratios must be strictly increasing")
        if not all(np.isfinite(p[1]) for p in self.points):
            raise CurveError("curve means must be finite")


def fsdem_score(curve: MetricCurve) -> float:
    """Curve mean plus OLS slope of the metric against rescaled position.

    Positions are rescaled to [0, 1] (a single point sits at 0.5 with
    slope 0), so a constant curve scores its constant and an increasing
    curve outscores a decreasing one of equal mean.
    """
    p = np.asarray([pt[1] for pt in curve.points], dtype=np.float64)
    if p.size == 0:
        raise CurveError("curve must have at least one point")
    if p.size == 1 or np.all(p == p[0]):
        return float(p[0])  # constant curves score their constant exactly
    t = np.linspace(0.0, 1.0, p.size)
    tc = t - t.mean()
    slope = float(np.sum(tc * (p - p.mean())) / np.sum(tc * tc))
    return float(p.mean() + slope)


def fsdem_stability(curve: MetricCurve) -> float | None:
    """1 minus the sample std of first differences, clamped to [0, 1].

    Needs at least 2 points; returns None (missing, not 0) otherwise.
    With exactly 2 points there is a single difference and the sample
    std is taken as 0.
    """
    p = np.asarray([pt[1] for pt in curve.points], dtype=np.float64)
    if p.size < 2:
        return None
    diffs = np.diff(p)
    spread = float(diffs.std(ddof=1)) if diffs.size > 1 else 0.0
    return float(min(1.0, max(0.0, 1.0 - spread)))
