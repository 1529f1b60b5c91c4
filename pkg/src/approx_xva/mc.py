"""Monte Carlo benchmark for the adjusted call price.

Each path carries the log-asset ``X`` (exact Gaussian steps) and both
intensities (Euler with full truncation). Per path we record

* the survival-discounted payoff ``exp(-int (r_phi + lambda)) f(X_T)``,
* the running adjustment integral of ``exp(-int (r_phi + lambda)) Lambda_s c(s, T)``
  by the trapezoidal rule on the simulation grid,
* the default-free control ``exp(-int h) f(X_T)``.

Randomness is drawn per block of ``BLOCK_SIZE`` paths from
``SeedSequence(seed, spawn_key=(block,))``, so results do not depend on how
blocks are spread over worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _accel, _kernels
from .blackscholes import MarketParams, bs_call
from .cir import CirParams
from .xva import DEFAULT_SETTINGS, ApproxSettings, CreditParams, XvaCoefficients, check_correlations, coefficients

BLOCK_SIZE = 4096


@dataclass(frozen=True)
class McConfig:
    n_paths: int = 200_000
    dt: float = 1.0 / 250.0
    seed: int = 12345
    control_variate: bool = True
    workers: int = 1

    def __post_init__(self):
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise ValueError(f"mc.paths must be a positive integer, got {self.n_paths}")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"mc.dt must be > 0, got {self.dt}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ValueError(f"mc.workers must be a positive integer, got {self.workers}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"mc.seed must be an integer in [0, 2^64), got {self.seed}")
        object.__setattr__(self, "n_paths", int(self.n_paths))
        object.__setattr__(self, "workers", int(self.workers))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    ci95_halfwidth: float
    n_paths: int
    cv_beta: float | None = None


@dataclass(frozen=True)
class PathSamples:
    """Per-path terms; ``payoff + psi`` is the raw price sample."""

    payoff: np.ndarray
    psi: np.ndarray
    control: np.ndarray

    @property
    def value(self) -> np.ndarray:
        return self.payoff + self.psi


def time_grid(t: float, T: float, dt: float) -> np.ndarray:
    """Nodes ``t = s_0 < ... < s_m = T``; only the last step may be shorter."""
    span = T - t
    n_full = int(math.floor(span / dt * (1.0 + 1e-12)))
    nodes = t + dt * np.arange(n_full + 1)
    if T - nodes[-1] > 1e-12 * max(1.0, abs(T)):
        nodes = np.append(nodes, T)
    else:
        nodes[-1] = T
    return nodes


def _step_tables(market: MarketParams, t: float, dt: float):
    s = time_grid(t, market.T, dt)
    steps = np.diff(s)
    return dict(
        dt=steps,
        h_int=np.asarray(market.h.integral(s[:-1], s[1:]), dtype=float),
        disc=np.exp(-np.asarray(market.r_phi.integral(t, s), dtype=float)),
        rbar=np.asarray(market.r.integral(s, market.T), dtype=float),
        tau=market.T - s,
        rhat=np.asarray(market.hat_r(s), dtype=float) * np.ones_like(s),
    )


def _kernel():
    return _kernels.paths_numba if _accel.HAS_NUMBA else _kernels.paths_numpy


def _block_normals(seed: int, block: int, n_steps: int, size: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))
    return rng.standard_normal((n_steps, 3, size))


def simulate_paths(market: MarketParams, credit: CreditParams, cir1: CirParams, cir2: CirParams,
                   rho1: float, rho2: float, config: McConfig = McConfig(), t: float = 0.0,
                   kernel=None) -> PathSamples:
    """Simulate ``config.n_paths`` paths and return the per-path terms.

    ``kernel`` overrides the backend (``_kernels.paths_numba`` or
    ``_kernels.paths_numpy``); by default numba is used when available.
    """
    return simulate_paths_multi(market, credit, cir1, cir2, [(rho1, rho2)], config, t, kernel)[0]


def simulate_paths_multi(market: MarketParams, credit: CreditParams, cir1: CirParams, cir2: CirParams,
                         rhos, config: McConfig = McConfig(), t: float = 0.0, kernel=None) -> list[PathSamples]:
    """Like :func:`simulate_paths` for several correlation pairs on common random numbers.

    Each block of normals is drawn once and reused for every pair, so entry
    ``i`` is bit-identical to ``simulate_paths`` at ``rhos[i]``.
    """
    rhos = [(float(a), float(b)) for a, b in rhos]
    for a, b in rhos:
        check_correlations(a, b)
    if not t < market.T:
        raise ValueError(f"need t < T (t={t}, T={market.T})")
    kernel = kernel or _kernel()
    tables = _step_tables(market, t, config.dt)
    n_steps = tables["dt"].shape[0]
    n = config.n_paths
    outs = [(np.empty(n), np.empty(n), np.empty(n)) for _ in rhos]
    c1 = np.array([cir1.lambda0, cir1.gamma, cir1.theta, cir1.eta])
    c2 = np.array([cir2.lambda0, cir2.gamma, cir2.theta, cir2.eta])
    n_blocks = -(-n // BLOCK_SIZE)

    def run(block):
        lo = block * BLOCK_SIZE
        hi = min(n, lo + BLOCK_SIZE)
        z = _block_normals(config.seed, block, n_steps, hi - lo)
        for (rho1, rho2), (pay, psi, ctrl) in zip(rhos, outs):
            kernel(z, market.x, market.sigma, market.kappa, c1, c2, rho1, rho2,
                   credit.R1, credit.alpha, tables["dt"], tables["h_int"], tables["disc"], tables["rbar"],
                   tables["tau"], tables["rhat"], pay[lo:hi], psi[lo:hi], ctrl[lo:hi])

    if config.workers == 1 or n_blocks == 1:
        for b in range(n_blocks):
            run(b)
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            list(pool.map(run, range(n_blocks)))
    return [PathSamples(*o) for o in outs]


def _control_mean(market: MarketParams, t: float) -> float:
    return bs_call(market.x, t, market.bar(market.h, t), market.sigma, market.T, market.kappa)


def estimate_from_samples(samples: PathSamples, control_mean: float | None) -> McEstimate:
    """Sample mean and standard error, with the fitted control when ``control_mean`` is given."""
    values = samples.value
    n = values.shape[0]
    if n < 2:
        raise ValueError("need at least 2 paths for a standard error")
    beta = None
    if control_mean is not None:
        ctrl = samples.control
        dc = ctrl - ctrl.mean()
        var = float(np.dot(dc, dc))
        beta = float(np.dot(values - values.mean(), dc) / var) if var > 0 else 0.0
        values = values - beta * (ctrl - control_mean)
    mean = float(np.mean(values))
    se = float(np.std(values, ddof=1) / math.sqrt(n))
    return McEstimate(mean, se, 1.96 * se, n, beta)


def estimate_price(market: MarketParams, credit: CreditParams, cir1: CirParams, cir2: CirParams,
                   rho1: float, rho2: float, config: McConfig = McConfig(), t: float = 0.0,
                   kernel=None) -> McEstimate:
    if config.n_paths < 2:
        raise ValueError("mc.paths must be >= 2 for a standard error")
    samples = simulate_paths(market, credit, cir1, cir2, rho1, rho2, config, t, kernel)
    return estimate_from_samples(samples, _control_mean(market, t) if config.control_variate else None)


@dataclass(frozen=True)
class GridRow:
    rho1: float
    rho2: float
    price_approx: float
    price_mc: float
    mc_se: float

    @property
    def error(self) -> float:
        return self.price_approx - self.price_mc


def error_grid(market: MarketParams, credit: CreditParams, cir1: CirParams, cir2: CirParams,
               rho_grid, config: McConfig = McConfig(), t: float = 0.0,
               settings: ApproxSettings = DEFAULT_SETTINGS,
               coeffs: XvaCoefficients | None = None) -> list[GridRow]:
    """First-order price against Monte Carlo on each ``(rho1, rho2)`` in order.

    All points are validated before any simulation; one coefficient triple is
    shared by the whole grid and every point reuses the same normals, so each
    row equals :func:`estimate_price` at that point.
    """
    grid = [(float(a), float(b)) for a, b in rho_grid]
    for a, b in grid:
        check_correlations(a, b)
    if not grid:
        return []
    if config.n_paths < 2:
        raise ValueError("mc.paths must be >= 2 for a standard error")
    if coeffs is None:
        coeffs = coefficients(market, credit, cir1, cir2, t, settings)
    control_mean = _control_mean(market, t) if config.control_variate else None
    rows = []
    samples = simulate_paths_multi(market, credit, cir1, cir2, grid, config, t)
    for (a, b), smp in zip(grid, samples):
        est = estimate_from_samples(smp, control_mean)
        rows.append(GridRow(a, b, coeffs.at(a, b).price, est.mean, est.std_error))
    return rows

