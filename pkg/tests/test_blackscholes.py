import math

import numpy as np
import pytest

from approx_xva.blackscholes import (
    MarketParams,
    bs_call,
    d12,
    expected_bs,
    expected_bs_closed,
    gauss_exp_cdf,
    norm_cdf,
)
from approx_xva.curves import RateCurve
from _oracle_values import GAUSS_EXP_CDF, NORM_CDF

LN100 = math.log(100.0)


@pytest.mark.parametrize("z, expected", sorted(NORM_CDF.items()))
def test_norm_cdf_oracle(z, expected):
    assert abs(norm_cdf(z) - expected) <= 1e-12


def test_norm_cdf_symmetry():
    z = np.linspace(-9, 9, 181)
    np.testing.assert_allclose(norm_cdf(z) + norm_cdf(-z), 1.0, atol=1e-15)
    assert norm_cdf(0.0) == 0.5


def test_d12_at_the_money():
    d1, d2 = d12(LN100, 0.0, 0.0, 0.4, 0.5, LN100)
    assert d1 == pytest.approx(0.1414214, abs=1e-7)
    assert d2 == pytest.approx(-0.1414214, abs=1e-7)


def test_d12_with_carry():
    d1, d2 = d12(LN100, 0.0, 0.0005, 0.4, 0.5, LN100)
    assert d1 == pytest.approx(0.143189, abs=1e-6)
    assert d1 - d2 == pytest.approx(0.4 * math.sqrt(0.5), abs=1e-15)


def test_d12_rejects_expired():
    with pytest.raises(ValueError):
        d12(LN100, 0.5, 0.0, 0.4, 0.5, LN100)
    with pytest.raises(ValueError):
        bs_call(LN100, 0.7, 0.0, 0.4, 0.5, LN100)


@pytest.mark.parametrize("T, vbar, published", [(0.5, 0.0005, 11.2685), (2.0, 0.002, 22.3480)])
def test_bs_call_default_free_anchors(T, vbar, published):
    assert abs(bs_call(LN100, 0.0, vbar, 0.4, T, LN100) - published) <= 1e-3


def test_bs_call_zero_strike_limit():
    assert bs_call(LN100, 0.0, 0.01, 0.4, 1.0, -60.0) == pytest.approx(100.0, rel=1e-14)


def test_bs_call_vectorised():
    x = np.log([80.0, 100.0, 120.0])
    out = bs_call(x, 0.0, 0.001, 0.3, 1.0, LN100)
    assert out.shape == (3,)
    assert out[1] == pytest.approx(bs_call(LN100, 0.0, 0.001, 0.3, 1.0, LN100))


@pytest.mark.parametrize("args, expected", sorted(GAUSS_EXP_CDF.items()))
def test_gauss_exp_cdf_oracle(args, expected):
    assert gauss_exp_cdf(*args) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_gauss_exp_cdf_zacks_case():
    for mu, nu in [(0.0, 1.0), (0.4, 0.3), (-1.1, 2.0)]:
        assert gauss_exp_cdf(0.0, mu, nu) == pytest.approx(norm_cdf(mu / math.sqrt(1 + nu * nu)), rel=1e-15)
    assert gauss_exp_cdf(0.0, 0.0, 1.0) == 0.5


def test_gauss_exp_cdf_rejects_negative_sd():
    with pytest.raises(ValueError):
        gauss_exp_cdf(1.0, 0.0, -0.1)


def _market(**kw):
    base = dict(r=0.001, h=0.001, r_phi=0.005, r_c=0.002)
    base.update(kw)
    return MarketParams.from_prices(100.0, 100.0, 0.4, 0.5, **base)


def test_market_validation():
    with pytest.raises(ValueError, match="sigma"):
        MarketParams(LN100, 0.0, LN100, 0.5)
    with pytest.raises(ValueError, match="T"):
        MarketParams(LN100, 0.2, LN100, 0.0)
    with pytest.raises(ValueError, match="finite"):
        MarketParams(float("nan"), 0.2, LN100, 1.0)
    m = _market()
    assert m.spot == pytest.approx(100.0) and m.strike == pytest.approx(100.0)


def test_expected_bs_degenerate_conditioning():
    m = _market(r=0.003, h=0.001)
    assert expected_bs(m, 0.0, 0.0) == pytest.approx(bs_call(m.x, 0.0, m.bar(m.r, 0.0), 0.4, 0.5, m.kappa), abs=1e-12)


def test_expected_bs_equal_rates():
    m = _market()
    s = 0.3
    assert expected_bs(m, 0.0, s) == pytest.approx(
        math.exp(0.001 * s) * bs_call(m.x, 0.0, m.bar(m.h, 0.0), 0.4, 0.5, m.kappa), rel=1e-13
    )


def test_expected_bs_matches_closed_form_with_curves():
    m = MarketParams.from_prices(
        95.0, 100.0, 0.3, 1.5,
        r=RateCurve((0.01, 0.02), (0.7,)), h=RateCurve((0.004, 0.0, 0.01), (0.2, 1.0)),
    )
    for s in (0.0, 0.1, 0.7, 1.2):
        assert expected_bs(m, 0.0, s) == pytest.approx(expected_bs_closed(m, 0.0, s), rel=1e-13)


def test_expected_bs_gaussian_sampling_oracle():
    m = _market()
    s = 0.25
    rng = np.random.default_rng(99)
    xs = m.x + m.h.integral(0.0, s) - 0.5 * 0.16 * s + 0.4 * math.sqrt(s) * rng.standard_normal(1_000_000)
    samples = bs_call(xs, s, m.bar(m.r, s), 0.4, 0.5, m.kappa)
    se = samples.std(ddof=1) / math.sqrt(samples.size)
    assert abs(expected_bs(m, 0.0, s) - samples.mean()) <= 3 * se


def test_expected_bs_errors():
    m = _market()
    with pytest.raises(ValueError):
        expected_bs(m, 0.0, 0.5)
    with pytest.raises(ValueError):
        expected_bs(m, 0.3, 0.2)
