"""CIR default intensities: affine bond coefficients and forward-measure moments.

Under the ``s``-forward (survival) measure the intensity keeps its CIR form
with the time-dependent mean-reversion speed ``gamma - eta^2 A(v, s)``. Every
moment below is an explicit expression in

    K(a, b) = int_a^b (gamma - eta^2 A(xi, s)) dxi,

which is closed form because ``int A = B / (gamma theta)``. The nested time
integrals are evaluated on a composite Gauss-Legendre grid whose spectral
integration matrix gives all running integrals at once.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .quadrature import GL_ORDER, PanelRule

FREEZE_MODES = ("at-theta", "at-lambda0", "at-mean")
MOMENT_MODES = ("paper", "tower")


class FellerWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CirParams:
    """``d lambda = gamma (theta - lambda) dt + eta sqrt(lambda) dB``."""

    lambda0: float
    gamma: float
    theta: float
    eta: float

    def __post_init__(self):
        for name in ("lambda0", "gamma", "theta", "eta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"cir.{name} must be finite")
            object.__setattr__(self, name, float(value))
        if self.gamma <= 0:
            raise ValueError(f"cir.gamma must be > 0, got {self.gamma}")
        if self.lambda0 < 0 or self.theta < 0 or self.eta < 0:
            raise ValueError("cir.lambda0, cir.theta and cir.eta must be >= 0")
        if 2.0 * self.gamma * self.theta < self.eta**2:
            warnings.warn(
                f"Feller condition violated: 2*gamma*theta={2 * self.gamma * self.theta:.6g} < eta^2={self.eta**2:.6g}",
                FellerWarning,
                stacklevel=3,
            )

    @classmethod
    def zero(cls) -> "CirParams":
        """An intensity that is identically zero."""
        return cls(0.0, 1.0, 0.0, 0.0)

    @property
    def h(self) -> float:
        return math.sqrt(self.gamma**2 + 2.0 * self.eta**2)

    def freeze_level(self, freeze: str) -> float:
        if freeze == "at-theta":
            return self.theta
        if freeze == "at-lambda0":
            return self.lambda0
        raise ValueError(f"unknown freeze mode {freeze!r}; expected one of {FREEZE_MODES}")


@dataclass(frozen=True)
class AffineCoeffs:
    """``N(t, s) = exp(A * lambda_t + B)``."""

    A: float
    B: float

    def bond(self, lam: float) -> float:
        return math.exp(self.A * lam + self.B)


def a_coeff(p: CirParams, tau):
    h, g = p.h, p.gamma
    em = -np.expm1(-h * np.asarray(tau, dtype=float))  # 1 - e^{-h tau}
    return -2.0 * em / ((h - g) * (1.0 - em) + h + g)


def a_integral(p: CirParams, tau):
    """``int_0^tau A``, written to stay accurate as ``eta -> 0``."""
    h, g = p.h, p.gamma
    tau = np.asarray(tau, dtype=float)
    em = -np.expm1(-h * tau)
    delta = p.eta**2 * em / (h * (h + g))
    safe = np.where(delta > 0, delta, 0.5)
    ratio = np.where(delta > 1e-300, -np.log1p(-safe) / safe, 1.0)
    return -2.0 * tau / (h + g) + 2.0 * em / (h * (h + g)) * ratio


def riccati(params: CirParams, t: float, s: float) -> AffineCoeffs:
    if s < t:
        raise ValueError(f"need t <= s (t={t}, s={s})")
    tau = s - t
    A = float(a_coeff(params, tau))
    B = float(params.gamma * params.theta * a_integral(params, tau))
    return AffineCoeffs(A, B)


def survival_single(params: CirParams, t: float, s: float) -> float:
    return riccati(params, t, s).bond(params.lambda0)


def survival(params1: CirParams, params2: CirParams, t: float, s: float) -> float:
    """``N(t, s) = E[exp(-int_t^s (lambda1 + lambda2))]`` for independent intensities."""
    return survival_single(params1, t, s) * survival_single(params2, t, s)


class ForwardMoments:
    """Moments of one intensity under the ``s``-forward measure, seen from ``t``.

    Node values live on a Gauss-Legendre grid over ``[t, end]`` (``end``
    defaults to ``s``); the ``*_end`` attributes hold the values at ``end``.

    Parameters
    ----------
    freeze : str
        How ``E[lambda_v^{-1/2}]`` is approximated: ``1/sqrt(theta)``,
        ``1/sqrt(lambda0)``, or ``1/sqrt(E[lambda_v])`` ("at-mean").
    """

    def __init__(self, params: CirParams, t: float, s: float, end: float | None = None,
                 freeze: str = "at-theta", order: int = GL_ORDER):
        end = s if end is None else end
        if not t <= end <= s:
            raise ValueError(f"need t <= u <= s (t={t}, u={end}, s={s})")
        if freeze not in FREEZE_MODES:
            raise ValueError(f"unknown freeze mode {freeze!r}; expected one of {FREEZE_MODES}")
        self.params, self.t, self.s, self.end, self.freeze = params, t, s, end, freeze
        p = params
        gt = p.gamma * p.theta
        self.rule = rule = PanelRule(t, end, order=order)
        u = rule.nodes
        self.nodes = u
        K = self.K(t, u)
        K_end = float(self.K(t, end))
        self._K_nodes, self._K_end = K, K_end

        # E lambda_u
        e1 = np.exp(K)
        self.mean = np.exp(-K) * (p.lambda0 + gt * rule.cumulative(e1))
        self.mean_end = math.exp(-K_end) * (p.lambda0 + gt * rule.integrate(e1))

    @cached_property
    def _inv_sqrt(self):
        p = self.params
        needed = (p.gamma * p.theta - 0.25 * p.eta**2) != 0.0 and self.end > self.t
        if self.freeze == "at-mean":
            level = self.mean
        else:
            level = np.full_like(self.nodes, p.freeze_level(self.freeze))
        if needed and np.any(level <= 0.0):
            raise ValueError(f"freeze level is zero for mode {self.freeze!r}")
        safe = np.where(level > 0.0, level, 1.0)
        return np.where(level > 0.0, 1.0 / np.sqrt(safe), 0.0)

    @cached_property
    def _sqrt_parts(self):
        p, K, K_end = self.params, self._K_nodes, self._K_end
        c_half = 0.5 * (p.gamma * p.theta - 0.25 * p.eta**2)
        f = np.exp(0.5 * K) * self._inv_sqrt
        nodes = np.exp(-0.5 * K) * (math.sqrt(p.lambda0) + c_half * self.rule.cumulative(f))
        end = math.exp(-0.5 * K_end) * (math.sqrt(p.lambda0) + c_half * self.rule.integrate(f))
        return nodes, end

    @property
    def sqrt_mean(self):
        """``E[sqrt(lambda_u)]`` at the nodes, with the frozen ``E[lambda^{-1/2}]``."""
        return self._sqrt_parts[0]

    @property
    def sqrt_mean_end(self) -> float:
        return self._sqrt_parts[1]

    @cached_property
    def _p32_parts(self):
        p, K, K_end = self.params, self._K_nodes, self._K_end
        c_32 = 1.5 * (p.gamma * p.theta + 0.25 * p.eta**2)
        f = np.exp(1.5 * K) * self.sqrt_mean
        nodes = np.exp(-1.5 * K) * (p.lambda0**1.5 + c_32 * self.rule.cumulative(f))
        end = math.exp(-1.5 * K_end) * (p.lambda0**1.5 + c_32 * self.rule.integrate(f))
        return nodes, end

    @property
    def mean_32(self):
        return self._p32_parts[0]

    @property
    def mean_32_end(self) -> float:
        return self._p32_parts[1]

    def K(self, a, b):
        """``int_a^b (gamma - eta^2 A(xi, s)) dxi``."""
        p = self.params
        ia = a_integral(p, self.s - np.asarray(a, dtype=float)) - a_integral(p, self.s - np.asarray(b, dtype=float))
        return p.gamma * (np.asarray(b) - np.asarray(a)) - p.eta**2 * ia

    def cov_with_bm(self) -> float:
        """``E^s_t[lambda_end (W_end - W_t)]``; needs ``end == s``."""
        if self.end != self.s:
            raise ValueError("covariance is defined at the forward horizon")
        eta = self.params.eta
        if eta == 0.0 or self.s == self.t:
            return 0.0
        decay = np.exp(-(self._K_end - self._K_nodes))
        return eta * self.rule.integrate(decay * self.sqrt_mean)

    def lambda_s_sqrt_lambda_u(self, mean_s: float, mode: str = "paper"):
        """``E^s_t[lambda_s sqrt(lambda_u)]`` at every node ``u``.

        ``paper`` treats ``lambda_s - lambda_u`` as independent of ``lambda_u``;
        ``tower`` conditions on the time-``u`` value instead, using the affine
        form ``E[lambda_s | lambda_u] = m(u, s) lambda_u + c(u, s)``.
        """
        if mode == "paper":
            return (mean_s - self.mean) * self.sqrt_mean + self.mean_32
        if mode == "tower":
            if self.end != self.s:
                raise ValueError("tower mode on the node grid needs end == s")
            m, c = self._conditional_mean_coeffs()
            return m * self.mean_32 + c * self.sqrt_mean
        raise ValueError(f"unknown moment mode {mode!r}; expected one of {MOMENT_MODES}")

    def _conditional_mean_coeffs(self):
        p = self.params
        decay = np.exp(-(self._K_end - self._K_nodes))
        tail = self.rule.integrate(decay) - self.rule.cumulative(decay)
        return decay, p.gamma * p.theta * tail


@lru_cache(maxsize=4096)
def forward_moments(params: CirParams, t: float, s: float, freeze: str = "at-theta") -> ForwardMoments:
    """Cached :class:`ForwardMoments` on ``[t, s]``; shared across g1/g2 nodes."""
    return ForwardMoments(params, t, s, freeze=freeze)


def _check_order(t, u, s):
    if not t <= u <= s:
        raise ValueError(f"need t <= u <= s (t={t}, u={u}, s={s})")


def fwd_mean_lambda(params: CirParams, t: float, u: float, s: float) -> float:
    _check_order(t, u, s)
    if u == t:
        return params.lambda0
    return ForwardMoments(params, t, s, end=u).mean_end


def fwd_mean_sqrt_lambda(params: CirParams, t: float, u: float, s: float, freeze: str = "at-theta") -> float:
    _check_order(t, u, s)
    if freeze not in FREEZE_MODES:
        raise ValueError(f"unknown freeze mode {freeze!r}; expected one of {FREEZE_MODES}")
    if u == t:
        return math.sqrt(params.lambda0)
    return ForwardMoments(params, t, s, end=u, freeze=freeze).sqrt_mean_end


def fwd_mean_lambda_32(params: CirParams, t: float, u: float, s: float, freeze: str = "at-theta") -> float:
    _check_order(t, u, s)
    if freeze not in FREEZE_MODES:
        raise ValueError(f"unknown freeze mode {freeze!r}; expected one of {FREEZE_MODES}")
    if u == t:
        return params.lambda0**1.5
    return ForwardMoments(params, t, s, end=u, freeze=freeze).mean_32_end


def fwd_cov_lambda_bm(params: CirParams, t: float, s: float, freeze: str = "at-theta") -> float:
    if s < t:
        raise ValueError(f"need t <= s (t={t}, s={s})")
    if params.eta == 0.0 or s == t:
        return 0.0
    return ForwardMoments(params, t, s, freeze=freeze).cov_with_bm()


def fwd_third_moment_split(params: CirParams, t: float, u: float, s: float,
                           freeze: str = "at-theta", moment_mode: str = "paper") -> float:
    """``E^s_t[lambda_s sqrt(lambda_u)]`` at a single ``u``."""
    _check_order(t, u, s)
    if moment_mode not in MOMENT_MODES:
        raise ValueError(f"unknown moment mode {moment_mode!r}; expected one of {MOMENT_MODES}")
    sq_u = fwd_mean_sqrt_lambda(params, t, u, s, freeze)
    p32_u = fwd_mean_lambda_32(params, t, u, s, freeze)
    if moment_mode == "paper":
        return (fwd_mean_lambda(params, t, s, s) - fwd_mean_lambda(params, t, u, s)) * sq_u + p32_u
    if u == s:
        return p32_u
    # E^s[lambda_s | lambda_u] = m lambda_u + c with m = e^{-K(u,s)}, c = gamma theta int_u^s e^{-K(v,s)} dv
    helper = ForwardMoments(params, t, s, end=u)
    m = math.exp(-float(helper.K(u, s)))
    rule = PanelRule(u, s)
    c = params.gamma * params.theta * rule.integrate(np.exp(-helper.K(rule.nodes, s)))
    return m * p32_u + c * sq_u
