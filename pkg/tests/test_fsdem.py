import numpy as np
import pytest

from fsbench import MetricCurve, fsdem_score, fsdem_stability
from fsbench.fsdem import CurveError


def _curve(means, experiment="10Percent", metric="ACC"):
    ratios = np.linspace(0.005, 0.1, len(means))
    return MetricCurve(experiment=experiment, metric=metric, points=tuple((r, m, 0.0) for r, m in zip(ratios, means)))


def test_constant_curve_scores_its_constant():
    assert fsdem_score(_curve([0.8] * 6)) == pytest.approx(0.8, abs=1e-15)


def test_linear_rise_scores_mean_plus_slope():
    # p = t over rescaled positions: mean 0.5, OLS slope 1.0
    means = np.linspace(0.0, 1.0, 11)
    assert fsdem_score(_curve(means)) == pytest.approx(1.5, abs=1e-12)


def test_single_point_curve():
    curve = MetricCurve(experiment="10Percent", metric="ACC", points=((0.05, 0.6, 0.0),))
    assert fsdem_score(curve) == 0.6
    assert fsdem_stability(curve) is None  # undefined, reported missing


def test_empty_curve_rejected():
    curve = MetricCurve(experiment="10Percent", metric="ACC", points=())
    with pytest.raises(CurveError):
        fsdem_score(curve)


def test_ratios_must_increase():
    with pytest.raises(CurveError):
        MetricCurve(experiment="10Percent", metric="ACC", points=((0.1, 0.5, 0.0), (0.05, 0.6, 0.0)))


def test_stability_constant_and_linear_curves():
    assert fsdem_stability(_curve([0.7] * 5)) == 1.0
    assert fsdem_stability(_curve(np.linspace(0.2, 0.9, 8))) == pytest.approx(1.0, abs=1e-12)


def test_stability_alternating_curve_clamps_to_zero():
    assert fsdem_stability(_curve([0.0, 1.0, 0.0, 1.0, 0.0, 1.0])) == 0.0


def test_offset_shifts_score_and_preserves_stability():
    rng = np.random.default_rng(0)
    means = rng.random(9)
    c = 0.37
    base_score = fsdem_score(_curve(means))
    base_stab = fsdem_stability(_curve(means))
    assert fsdem_score(_curve(means + c)) == pytest.approx(base_score + c, abs=1e-12)
    assert fsdem_stability(_curve(means + c)) == pytest.approx(base_stab, abs=1e-12)


def test_increasing_beats_decreasing_at_equal_mean():
    up = np.linspace(0.3, 0.7, 7)
    down = up[::-1]
    assert abs(up.mean() - down.mean()) < 1e-15
    assert fsdem_score(_curve(up)) > fsdem_score(_curve(down))
