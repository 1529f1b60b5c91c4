"""First-order XVA price of a European call with CIR default intensities.

The adjusted price is expanded to first order in the correlations between
the asset driver and the two intensity drivers,

    c^a(rho) ~ g0 + g1 * rho1 + g2 * rho2,

with every coefficient reduced to one outer time integral (adaptive
quadrature) over forward-measure moments from :mod:`approx_xva.cir`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import cir
from .blackscholes import MarketParams, bs_call, d12, norm_cdf
from .cir import CirParams
from .quadrature import adaptive


@dataclass(frozen=True)
class CreditParams:
    """Collateral fraction and losses given default.

    Parameters
    ----------
    alpha : float
        Fraction of the close-out value held as collateral, in [0, 1].
    L1, L2 : float
        Counterparty and investor losses given default, in [0, 1]. Only
        ``(1 - alpha) * L1`` enters a call price; ``L2`` is kept for
        completeness.
    """

    alpha: float
    L1: float
    L2: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "L1", "L2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"credit.{name} must be finite")
            object.__setattr__(self, name, value)
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"credit.alpha must be in [0, 1], got {self.alpha}")
        for name in ("L1", "L2"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"credit.{name} must be in [0, 1], got {getattr(self, name)}")

    @property
    def effective_L1(self) -> float:
        return (1.0 - self.alpha) * self.L1

    @property
    def R1(self) -> float:
        return 1.0 - self.effective_L1


@dataclass(frozen=True)
class ApproxSettings:
    """Numerical choices for the coefficients.

    ``freeze`` is one mode for both intensities or a pair (counterparty,
    investor).
    """

    freeze: str | tuple = "at-theta"
    moment_mode: str = "paper"
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12

    def __post_init__(self):
        for mode in self.freeze_pair:
            if mode not in cir.FREEZE_MODES:
                raise ValueError(f"approx.freeze_mode: unknown mode {mode!r}; expected one of {cir.FREEZE_MODES}")
        if self.moment_mode not in cir.MOMENT_MODES:
            raise ValueError(
                f"approx.moment_mode: unknown mode {self.moment_mode!r}; expected one of {cir.MOMENT_MODES}"
            )
        if not self.rel_tol > 0:
            raise ValueError("approx.quad_rel_tol must be > 0")

    @property
    def freeze_pair(self) -> tuple:
        if isinstance(self.freeze, str):
            return (self.freeze, self.freeze)
        return tuple(self.freeze)


DEFAULT_SETTINGS = ApproxSettings()


@dataclass(frozen=True)
class XvaBreakdown:
    g0: float
    g1: float
    g2: float
    rho1: float
    rho2: float
    price: float


@dataclass(frozen=True)
class XvaCoefficients:
    """``(g0, g1, g2)`` computed once and reused across correlation pairs."""

    g0: float
    g1: float
    g2: float
    settings: ApproxSettings = field(default=DEFAULT_SETTINGS, compare=False)

    def at(self, rho1: float, rho2: float) -> XvaBreakdown:
        check_correlations(rho1, rho2)
        price = self.g0 + self.g1 * rho1 + self.g2 * rho2
        return XvaBreakdown(self.g0, self.g1, self.g2, float(rho1), float(rho2), price)


def check_correlations(rho1: float, rho2: float) -> None:
    if not (math.isfinite(rho1) and math.isfinite(rho2)):
        raise ValueError("correlations must be finite")
    if rho1 * rho1 + rho2 * rho2 > 1.0 + 1e-12:
        raise ValueError(f"need rho1^2 + rho2^2 <= 1, got ({rho1}, {rho2})")


def _breakpoints(market: MarketParams):
    pts = set()
    for curve in (market.r, market.r_phi, market.r_c, market.h):
        pts.update(curve.knots)
    return sorted(pts)


def _check_time(market: MarketParams, t: float):
    if not t < market.T:
        raise ValueError(f"need t < T (t={t}, T={market.T})")


def _mean_at_horizon(params: CirParams, t: float, s: float) -> float:
    if s == t:
        return params.lambda0
    return cir.forward_moments(params, t, s).mean_end


def g0(market: MarketParams, credit: CreditParams, cir1: CirParams, cir2: CirParams, t: float = 0.0,
       settings: ApproxSettings = DEFAULT_SETTINGS) -> float:
    """Zeroth-order (uncorrelated) adjusted price."""
    _check_time(market, t)
    T, sigma, kappa = market.T, market.sigma, market.kappa
    hbar_t = market.bar(market.h, t)
    R1, alpha = credit.R1, credit.alpha
    terminal = (
        math.exp(-market.tilde_r_integral(t, T))
        * cir.survival(cir1, cir2, t, T)
        * bs_call(market.x, t, hbar_t, sigma, T, kappa)
    )

    def integrand(s):
        gap = market.carry_gap(s)
        weight = R1 * _mean_at_horizon(cir1, t, s) + _mean_at_horizon(cir2, t, s) + alpha * market.hat_r(s)
        return (
            math.exp(-market.tilde_r_integral(t, s) - gap)
            * cir.survival(cir1, cir2, t, s)
            * weight
            * bs_call(market.x + gap, t, hbar_t, sigma, T, kappa)
        )

    running = adaptive(integrand, t, T, settings.rel_tol, settings.abs_tol, points=_breakpoints(market))
    return terminal + running


def _g_first_order(j: int, market: MarketParams, credit: CreditParams, cir1: CirParams, cir2: CirParams,
                   t: float, settings: ApproxSettings) -> float:
    own, other = (cir1, cir2) if j == 1 else (cir2, cir1)
    eta = own.eta
    if eta == 0.0:
        return 0.0
    freeze_own = settings.freeze_pair[j - 1]
    T, sigma, kappa = market.T, market.sigma, market.kappa
    hbar_t = market.bar(market.h, t)
    R1, alpha = credit.R1, credit.alpha
    # counterparty loss scales every lambda^1 term, including the third moment
    R_own = R1 if j == 1 else 1.0
    R_other = 1.0 if j == 1 else R1

    fm_T = cir.forward_moments(own, t, T, freeze_own)
    a_T = cir.a_coeff(own, T - fm_T.nodes)
    d1_t, _ = d12(market.x, t, hbar_t, sigma, T, kappa)
    terminal = (
        eta
        * math.exp(market.x - market.tilde_r_integral(t, T))
        * cir.survival(cir1, cir2, t, T)
        * norm_cdf(d1_t)
        * fm_T.rule.integrate(a_T * fm_T.sqrt_mean)
    )

    def integrand(s):
        if s <= t:
            return 0.0
        fm = cir.forward_moments(own, t, s, freeze_own)
        a_s = cir.a_coeff(own, s - fm.nodes)
        third = fm.lambda_s_sqrt_lambda_u(fm.mean_end, settings.moment_mode)
        rest = R_other * _mean_at_horizon(other, t, s) + alpha * market.hat_r(s)
        inner = fm.rule.integrate(a_s * (R_own * third + rest * fm.sqrt_mean))
        bracket = R_own * fm.cov_with_bm() + eta * inner
        gap = market.carry_gap(s)
        d1_s, _ = d12(market.x + gap, t, hbar_t, sigma, T, kappa)
        return (
            math.exp(market.x - market.tilde_r_integral(t, s))
            * cir.survival(cir1, cir2, t, s)
            * norm_cdf(d1_s)
            * bracket
        )

    running = adaptive(integrand, t, T, settings.rel_tol, settings.abs_tol, points=_breakpoints(market))
    return sigma * (terminal + running)


def g1(market: MarketParams, credit: CreditParams, cir1: CirParams, cir2: CirParams, t: float = 0.0,
       settings: ApproxSettings = DEFAULT_SETTINGS) -> float:
    """Sensitivity to the asset/counterparty-intensity correlation."""
    _check_time(market, t)
    return _g_first_order(1, market, credit, cir1, cir2, t, settings)


def g2(market: MarketParams, credit: CreditParams, cir1: CirParams, cir2: CirParams, t: float = 0.0,
       settings: ApproxSettings = DEFAULT_SETTINGS) -> float:
    """Sensitivity to the asset/investor-intensity correlation."""
    _check_time(market, t)
    return _g_first_order(2, market, credit, cir1, cir2, t, settings)


def coefficients(market: MarketParams, credit: CreditParams, cir1: CirParams, cir2: CirParams, t: float = 0.0,
                 settings: ApproxSettings = DEFAULT_SETTINGS) -> XvaCoefficients:
    return XvaCoefficients(
        g0(market, credit, cir1, cir2, t, settings),
        g1(market, credit, cir1, cir2, t, settings),
        g2(market, credit, cir1, cir2, t, settings),
        settings,
    )


def price_first_order(market: MarketParams, credit: CreditParams, cir1: CirParams, cir2: CirParams,
                      t: float = 0.0, rho1: float = 0.0, rho2: float = 0.0,
                      settings: ApproxSettings = DEFAULT_SETTINGS,
                      coeffs: XvaCoefficients | None = None) -> XvaBreakdown:
    """First-order adjusted price at ``(rho1, rho2)``.

    Pass ``coeffs`` to reuse coefficients from :func:`coefficients`.
    """
    check_correlations(rho1, rho2)
    if coeffs is None:
        coeffs = coefficients(market, credit, cir1, cir2, t, settings)
    return coeffs.at(rho1, rho2)


def price_const_intensity(market: MarketParams, credit: CreditParams, lam1: float, lam2: float,
                          t: float = 0.0, terminal_sign: int = -1,
                          settings: ApproxSettings = DEFAULT_SETTINGS) -> float:
    """Adjusted price when both intensities are constant.

    Parameters
    ----------
    terminal_sign : {-1, +1}
        Sign of ``lam1 + lam2`` in the exponent of the terminal term. ``-1``
        is survival discounting and agrees with :func:`g0` for constant
        intensities. ``+1`` is the variant with a growing terminal factor;
        it is only kept for comparing against published tables computed that
        way.
    """
    _check_time(market, t)
    if lam1 < 0 or lam2 < 0:
        raise ValueError(f"intensities must be >= 0, got ({lam1}, {lam2})")
    if terminal_sign not in (-1, 1):
        raise ValueError("terminal_sign must be -1 or +1")
    T, sigma, kappa = market.T, market.sigma, market.kappa
    hbar_t = market.bar(market.h, t)
    lam = lam1 + lam2
    terminal = math.exp(terminal_sign * lam * (T - t) - market.tilde_r_integral(t, T)) * bs_call(
        market.x, t, hbar_t, sigma, T, kappa
    )
    L1 = credit.effective_L1

    def integrand(s):
        gap = market.carry_gap(s)
        weight = lam + credit.alpha * market.hat_r(s) - lam1 * L1
        return (
            math.exp(-lam * (s - t) - market.tilde_r_integral(t, s) - gap)
            * weight
            * bs_call(market.x + gap, t, hbar_t, sigma, T, kappa)
        )

    return terminal + adaptive(integrand, t, T, settings.rel_tol, settings.abs_tol, points=_breakpoints(market))


__all__ = [
    "ApproxSettings",
    "CreditParams",
    "XvaBreakdown",
    "XvaCoefficients",
    "check_correlations",
    "coefficients",
    "g0",
    "g1",
    "g2",
    "price_const_intensity",
    "price_first_order",
]
