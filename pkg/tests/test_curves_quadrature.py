import math

import numpy as np
import pytest

from approx_xva.curves import RateCurve
from approx_xva.quadrature import PanelRule, QuadratureError, adaptive


def test_flat_curve():
    c = RateCurve.flat(0.02)
    assert c.is_flat and c(3.0) == 0.02
    assert c.integral(0.5, 2.0) == pytest.approx(0.03, abs=1e-17)


def test_piecewise_integral_exact():
    c = RateCurve((0.01, 0.03, 0.02), (0.5, 1.0))
    assert c(0.49) == 0.01 and c(0.5) == 0.03 and c(1.7) == 0.02
    assert c.integral(0.0, 2.0) == pytest.approx(0.005 + 0.015 + 0.02, abs=1e-16)
    assert c.integral(0.75, 0.25) == pytest.approx(-(0.0025 + 0.0075), abs=1e-16)
    np.testing.assert_allclose(c.integral(np.array([0.0, 0.5]), 1.0), [0.02, 0.015], atol=1e-16)


def test_curve_validation():
    with pytest.raises(ValueError):
        RateCurve((0.01, 0.02), ())
    with pytest.raises(ValueError):
        RateCurve((0.01, 0.02, 0.03), (1.0, 0.5))
    with pytest.raises(ValueError):
        RateCurve((float("inf"),))


@pytest.mark.parametrize("a, b", [(0.0, 0.5), (0.0, 2.0), (0.3, 3.7)])
def test_panel_rule_integrates_and_accumulates(a, b):
    rule = PanelRule(a, b)
    f = lambda x: np.exp(-0.7 * x) * np.cos(2 * x)
    F = lambda x: np.exp(-0.7 * x) * (2 * np.sin(2 * x) - 0.7 * np.cos(2 * x)) / (0.49 + 4)
    assert rule.integrate(f(rule.nodes)) == pytest.approx(F(b) - F(a), abs=1e-14)
    np.testing.assert_allclose(rule.cumulative(f(rule.nodes)), F(rule.nodes) - F(a), atol=1e-14)


def test_panel_count():
    assert PanelRule(0.0, 0.5).n_panels == 1
    assert PanelRule(0.0, 1.0).n_panels == 1
    assert PanelRule(0.0, 2.5).n_panels == 3


def test_adaptive_matches_closed_form():
    assert adaptive(math.exp, 0.0, 1.0) == pytest.approx(math.e - 1, rel=1e-12)
    assert adaptive(math.exp, 1.0, 1.0) == 0.0


def test_adaptive_breakpoints():
    step = lambda x: 1.0 if x < 0.3 else 2.0
    assert adaptive(step, 0.0, 1.0, points=[0.3]) == pytest.approx(1.7, rel=1e-12)


def test_adaptive_reports_failure():
    with pytest.raises(QuadratureError):
        adaptive(lambda x: math.sin(1.0 / x) / x, 1e-8, 1.0, rel_tol=1e-12, limit=5)
