"""Black-Scholes building blocks for the call on the log-price ``x``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .curves import RateCurve


@dataclass(frozen=True)
class MarketParams:
    """Asset and deterministic rate data.

    Parameters
    ----------
    x : float
        Log of the initial asset price.
    sigma : float
        Lognormal volatility, > 0.
    kappa : float
        Log strike.
    T : float
        Maturity in years, > 0.
    r, r_phi, r_c, h : RateCurve or float
        Risk-free, funding, collateral and repo (hedging) rates.
    """

    x: float
    sigma: float
    kappa: float
    T: float
    r: RateCurve = field(default_factory=lambda: RateCurve.flat(0.0))
    r_phi: RateCurve = field(default_factory=lambda: RateCurve.flat(0.0))
    r_c: RateCurve = field(default_factory=lambda: RateCurve.flat(0.0))
    h: RateCurve = field(default_factory=lambda: RateCurve.flat(0.0))

    def __post_init__(self):
        for name in ("r", "r_phi", "r_c", "h"):
            object.__setattr__(self, name, RateCurve.coerce(getattr(self, name)))
        for name in ("x", "sigma", "kappa", "T"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"market.{name} must be finite")
        if self.sigma <= 0:
            raise ValueError(f"market.sigma must be > 0, got {self.sigma}")
        if self.T <= 0:
            raise ValueError(f"market.T must be > 0, got {self.T}")

    @classmethod
    def from_prices(cls, spot: float, strike: float, sigma: float, T: float, **rates) -> "MarketParams":
        return cls(x=math.log(spot), sigma=sigma, kappa=math.log(strike), T=T, **rates)

    @property
    def spot(self) -> float:
        return math.exp(self.x)

    @property
    def strike(self) -> float:
        return math.exp(self.kappa)

    def bar(self, curve: RateCurve, s):
        """``int_s^T`` of ``curve``."""
        return curve.integral(s, self.T)

    def tilde_r_integral(self, a, b):
        """``int_a^b (r_phi - h)``."""
        return self.r_phi.integral(a, b) - self.h.integral(a, b)

    def hat_r(self, s):
        """Funding minus collateral rate at ``s``."""
        return self.r_phi(s) - self.r_c(s)

    def carry_gap(self, s):
        """``rbar_s - hbar_s``, the risk-free minus repo accumulation over [s, T]."""
        return self.bar(self.r, s) - self.bar(self.h, s)


def norm_cdf(z):
    """Standard normal distribution function.

    ``scipy.special.ndtr`` goes through ``erfc`` in the lower tail, so the
    absolute error stays at the 1e-16 level over the whole real line.
    """
    out = ndtr(z)
    return float(out) if np.ndim(out) == 0 else out


def d12(x, s, vbar, sigma, T, kappa):
    if np.any(np.asarray(s) >= T):
        raise ValueError(f"time to maturity must be positive (s={s}, T={T})")
    vol = sigma * np.sqrt(T - s)
    d1 = (x - kappa + vbar + 0.5 * sigma * sigma * (T - s)) / vol
    return d1, d1 - vol


def bs_call(x, s, vbar, sigma, T, kappa):
    """Black-Scholes call on log-price ``x`` at time ``s``, discounting ``vbar``."""
    d1, d2 = d12(x, s, vbar, sigma, T, kappa)
    out = np.exp(x) * ndtr(d1) - np.exp(kappa - vbar) * ndtr(d2)
    return float(out) if np.ndim(out) == 0 else out


def gauss_exp_cdf(p, mu, nu):
    """``E[exp(p X) N(X)]`` for ``X ~ N(mu, nu^2)`` in closed form."""
    if np.any(np.asarray(nu) < 0):
        raise ValueError("nu must be non-negative")
    nu2 = np.asarray(nu, dtype=float) ** 2
    out = np.exp(p * mu + 0.5 * p * p * nu2) * ndtr((mu + p * nu2) / np.sqrt(1.0 + nu2))
    return float(out) if np.ndim(out) == 0 else out


def expected_bs(market: MarketParams, t: float, s: float) -> float:
    """``E_t[c_BS(X_s, s, rbar_s, sigma)]`` with ``X`` drifting at the repo rate.

    Computed from the Gaussian law of ``X_s`` by two applications of
    :func:`gauss_exp_cdf`; for ``s == t`` this is just the Black-Scholes price.
    """
    T, sigma, kappa = market.T, market.sigma, market.kappa
    if s >= T:
        raise ValueError(f"need s < T (s={s}, T={T})")
    if s < t:
        raise ValueError(f"need t <= s (t={t}, s={s})")
    rbar_s = market.bar(market.r, s)
    if s == t:
        return bs_call(market.x, t, rbar_s, sigma, T, kappa)
    mean_x = market.x + market.h.integral(t, s) - 0.5 * sigma * sigma * (s - t)
    sd_x = sigma * math.sqrt(s - t)
    slope = 1.0 / (sigma * math.sqrt(T - s))
    shift1 = (-kappa + rbar_s + 0.5 * sigma * sigma * (T - s)) * slope
    shift2 = shift1 - sigma * math.sqrt(T - s)
    # d_i = shift_i + slope * X, so exp(X) = exp((d_1 - shift1) / slope)
    mu1 = shift1 + slope * mean_x
    mu2 = shift2 + slope * mean_x
    nu = slope * sd_x
    term1 = math.exp(-shift1 / slope) * gauss_exp_cdf(1.0 / slope, mu1, nu)
    term2 = math.exp(kappa - rbar_s) * gauss_exp_cdf(0.0, mu2, nu)
    return term1 - term2


def expected_bs_closed(market: MarketParams, t: float, s: float) -> float:
    """Shifted Black-Scholes form of :func:`expected_bs`."""
    gap = market.carry_gap(s)
    hbar_t = market.bar(market.h, t)
    return math.exp(-gap + market.h.integral(t, s)) * bs_call(
        market.x + gap, t, hbar_t, market.sigma, market.T, market.kappa
    )
