import math
import os
import subprocess
import sys
from dataclasses import replace

import numpy as np
import pytest

from approx_xva import _accel, _kernels, mc, presets
from approx_xva.blackscholes import MarketParams, bs_call
from approx_xva.cir import CirParams
from approx_xva.xva import CreditParams, g0, price_const_intensity

SMALL = mc.McConfig(n_paths=20_000, dt=1 / 100, seed=3)


def test_config_validation():
    for bad in [dict(n_paths=0), dict(dt=0.0), dict(workers=0), dict(seed=-1), dict(n_paths=2.5)]:
        with pytest.raises(ValueError):
            mc.McConfig(**bad)


def test_time_grid_shortens_last_step():
    g = mc.time_grid(0.0, 0.5, 0.3)
    np.testing.assert_allclose(g, [0.0, 0.3, 0.5])
    g = mc.time_grid(0.0, 0.5, 1 / 250)
    assert g.size == 126 and g[-1] == 0.5
    assert np.all(np.diff(g) <= 1 / 250 + 1e-15)


@pytest.mark.parametrize("workers", [4, 16])
def test_worker_count_invariance(workers):
    sc = presets.table4(0.5)
    base = mc.estimate_price(sc.market, sc.credit, sc.cir1, sc.cir2, 0.3, -0.2, SMALL)
    other = mc.estimate_price(sc.market, sc.credit, sc.cir1, sc.cir2, 0.3, -0.2, replace(SMALL, workers=workers))
    assert other == base


@pytest.mark.skipif(not _accel.HAS_NUMBA, reason="numba not available")
def test_backends_agree():
    sc = presets.table4(2.0)
    cfg = mc.McConfig(n_paths=5000, dt=1 / 50, seed=11)
    a = mc.simulate_paths(sc.market, sc.credit, sc.cir1, sc.cir2, 0.4, 0.3, cfg, kernel=_kernels.paths_numba)
    b = mc.simulate_paths(sc.market, sc.credit, sc.cir1, sc.cir2, 0.4, 0.3, cfg, kernel=_kernels.paths_numpy)
    np.testing.assert_allclose(a.value, b.value, rtol=1e-10, atol=1e-10)
    np.testing.assert_allclose(a.control, b.control, rtol=1e-10, atol=1e-10)


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, APPROX_XVA_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "import approx_xva; print(approx_xva.backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_needs_two_paths():
    sc = presets.table4(0.5)
    with pytest.raises(ValueError):
        mc.estimate_price(sc.market, sc.credit, sc.cir1, sc.cir2, 0.0, 0.0, mc.McConfig(n_paths=1))


def test_correlation_domain():
    sc = presets.table4(0.5)
    with pytest.raises(ValueError):
        mc.simulate_paths(sc.market, sc.credit, sc.cir1, sc.cir2, 0.8, 0.8, SMALL)


def test_default_free_reduction():
    m = MarketParams.from_prices(100.0, 100.0, 0.4, 0.5, r=0.001, h=0.001, r_phi=0.001, r_c=0.001)
    z = CirParams.zero()
    expected = bs_call(m.x, 0.0, m.bar(m.h, 0.0), 0.4, 0.5, m.kappa)
    est = mc.estimate_price(m, CreditParams(0.5, 0.6), z, z, 0.0, 0.0, replace(SMALL, control_variate=False))
    assert abs(est.mean - expected) <= 3 * est.std_error


def test_constant_intensities_match_closed_form_for_any_rho():
    sc = presets.table5(100.0, 0.5)
    c1 = CirParams(0.04, 0.02, 0.04, 0.0)
    c2 = CirParams(0.02, 0.35, 0.02, 0.0)
    exact = price_const_intensity(sc.market, sc.credit, 0.04, 0.02)
    for rho in [(0.0, 0.0), (0.6, -0.6), (-0.5, 0.5)]:
        est = mc.estimate_price(sc.market, sc.credit, c1, c2, *rho, SMALL)
        assert abs(est.mean - exact) <= 3 * est.std_error + 1e-3


def test_trapezoid_bias_is_first_order_small():
    # with frozen intensities the per-path adjustment integral is the only dt-dependent part
    sc = presets.table5(100.0, 0.5)
    c1 = CirParams(0.04, 0.02, 0.04, 0.0)
    c2 = CirParams(0.02, 0.35, 0.02, 0.0)
    coarse = mc.estimate_price(sc.market, sc.credit, c1, c2, 0.0, 0.0, mc.McConfig(20_000, 1 / 50, 5))
    fine = mc.estimate_price(sc.market, sc.credit, c1, c2, 0.0, 0.0, mc.McConfig(20_000, 1 / 200, 5))
    exact = price_const_intensity(sc.market, sc.credit, 0.04, 0.02)
    assert abs(fine.mean - exact) <= 3 * fine.std_error + 2e-4
    assert abs(coarse.mean - exact) <= 3 * coarse.std_error + 1e-3


def test_control_variate_unbiased_and_tighter():
    sc = presets.table4(0.5)
    on = mc.estimate_price(sc.market, sc.credit, sc.cir1, sc.cir2, 0.0, 0.0, SMALL)
    off = mc.estimate_price(sc.market, sc.credit, sc.cir1, sc.cir2, 0.0, 0.0, replace(SMALL, control_variate=False))
    assert off.cv_beta is None and on.cv_beta is not None
    assert abs(on.mean - off.mean) <= 3 * math.hypot(on.std_error, off.std_error)
    assert off.ci95_halfwidth >= 5 * on.ci95_halfwidth
    assert on.ci95_halfwidth == 1.96 * on.std_error


def test_rho_zero_anchor_small():
    sc = presets.table4(0.5)
    est = mc.estimate_price(sc.market, sc.credit, sc.cir1, sc.cir2, 0.0, 0.0, mc.McConfig(50_000, 1 / 100, 21))
    assert abs(est.mean - g0(sc.market, sc.credit, sc.cir1, sc.cir2)) <= max(2e-3, 3 * est.std_error)


def test_error_grid_rows():
    sc = presets.table4(0.5)
    assert mc.error_grid(sc.market, sc.credit, sc.cir1, sc.cir2, [], SMALL) == []
    grid = [(0.2, 0.0), (0.0, 0.0), (-0.4, 0.3)]
    rows = mc.error_grid(sc.market, sc.credit, sc.cir1, sc.cir2, grid, SMALL)
    assert [(r.rho1, r.rho2) for r in rows] == grid
    single = mc.estimate_price(sc.market, sc.credit, sc.cir1, sc.cir2, -0.4, 0.3, SMALL)
    assert rows[2].price_mc == single.mean and rows[2].mc_se == single.std_error
    assert rows[1].error == rows[1].price_approx - rows[1].price_mc


def test_error_grid_validates_before_simulating(monkeypatch):
    sc = presets.table4(0.5)
    monkeypatch.setattr(mc, "simulate_paths_multi", lambda *a, **k: pytest.fail("simulated"))
    with pytest.raises(ValueError):
        mc.error_grid(sc.market, sc.credit, sc.cir1, sc.cir2, [(0.0, 0.0), (0.8, 0.8)], SMALL)


def _run_on_normals(sc, z, dt, rho=(0.0, 0.0)):
    tables = mc._step_tables(sc.market, 0.0, dt)
    n = z.shape[2]
    pay, psi, ctrl = np.empty(n), np.empty(n), np.empty(n)
    c = [np.array([p.lambda0, p.gamma, p.theta, p.eta]) for p in (sc.cir1, sc.cir2)]
    mc._kernel()(z, sc.market.x, sc.market.sigma, sc.market.kappa, c[0], c[1], *rho, sc.credit.R1,
                 sc.credit.alpha, tables["dt"], tables["h_int"], tables["disc"], tables["rbar"], tables["tau"],
                 tables["rhat"], pay, psi, ctrl)
    control_mean = bs_call(sc.market.x, 0.0, sc.market.bar(sc.market.h, 0.0), sc.market.sigma,
                           sc.market.T, sc.market.kappa)
    return mc.estimate_from_samples(mc.PathSamples(pay, psi, ctrl), control_mean)


@pytest.mark.slow
def test_discretisation_convergence():
    # coarse increments are sums of fine ones, so the gap isolates the time-step bias
    sc = presets.table4(0.5)
    rng = np.random.default_rng(8)
    n = 100_000
    samples = {"fine": [], "coarse": []}
    for _ in range(n // 10_000):
        zf = rng.standard_normal((250, 3, 10_000))
        zc = (zf[0::2] + zf[1::2]) / math.sqrt(2.0)
        samples["fine"].append(_run_on_normals(sc, zf, 1 / 500))
        samples["coarse"].append(_run_on_normals(sc, zc, 1 / 250))
    fine_mean = np.mean([e.mean for e in samples["fine"]])
    coarse_mean = np.mean([e.mean for e in samples["coarse"]])
    se = math.sqrt(np.mean([e.std_error**2 for e in samples["fine"]]) / len(samples["fine"]))
    assert abs(fine_mean - coarse_mean) <= se


@pytest.mark.slow
def test_mc_price_follows_sign_of_g1():
    # g1 < 0 here (as in the published coefficients), so prices fall as rho1 rises
    sc = presets.table4(0.5)
    cfg = mc.McConfig(100_000, 1 / 250, 9)
    rows = mc.error_grid(sc.market, sc.credit, sc.cir1, sc.cir2, [(r, 0.0) for r in (-0.6, -0.3, 0.0, 0.3, 0.6)], cfg)
    for a, b in zip(rows, rows[1:]):
        assert b.price_mc <= a.price_mc + 2 * math.hypot(a.mc_se, b.mc_se)
    assert rows[-1].price_mc < rows[0].price_mc
