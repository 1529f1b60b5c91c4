"""Regenerate the frozen forward-measure Monte Carlo oracles.

Independent of the package: the bond coefficient ``A(v, s)`` comes from a
numerical solution of its Riccati ODE, and the intensity is simulated under
the forward measure with Euler full truncation driven by the forward-measure
Brownian motion ``W``. Prints a dict literal to paste into
``tests/_oracle_values.py``.

Usage: python3 tests/oracles/generate_moment_oracles.py [n_paths] [steps_per_year]
"""

import sys

import numpy as np
from scipy.integrate import solve_ivp

SETS = {
    "counterparty": (0.03, 0.02, 0.161, 0.08),
    "investor": (0.035, 0.35, 0.45, 0.15),
}
T0, U, S = 0.0, 0.25, 0.5


def riccati_A(params, s, grid):
    _, g, _, e = params
    # dA/dt = 1 + g A - e^2 A^2 / 2, A(s) = 0, integrated backwards
    sol = solve_ivp(lambda t, a: 1.0 + g * a - 0.5 * e * e * a * a, (s, grid[0]), [0.0],
                    t_eval=grid[::-1], rtol=1e-12, atol=1e-14)
    return sol.y[0][::-1]


def simulate(params, n_paths, steps_per_year, seed, chunk=100_000):
    l0, g, th, e = params
    m = int(round((S - T0) * steps_per_year))
    dt = (S - T0) / m
    grid = T0 + dt * np.arange(m + 1)
    A = riccati_A(params, S, grid)
    k_u = int(round((U - T0) / dt))
    rng = np.random.default_rng(seed)
    acc = {k: [] for k in ("mean_u", "mean_s", "sqrt_u", "p32_u", "cov_s", "third")}
    done = 0
    while done < n_paths:
        n = min(chunk, n_paths - done)
        lam = np.full(n, l0)
        w = np.zeros(n)
        for k in range(m):
            lp = np.maximum(lam, 0.0)
            dw = rng.standard_normal(n) * np.sqrt(dt)
            kappa = g - e * e * A[k]
            lam = lam + (g * th - kappa * lp) * dt + e * np.sqrt(lp) * dw
            w += dw
            if k + 1 == k_u:
                lu = np.maximum(lam, 0.0)
        ls = np.maximum(lam, 0.0)
        acc["mean_u"].append(lu)
        acc["mean_s"].append(ls)
        acc["sqrt_u"].append(np.sqrt(lu))
        acc["p32_u"].append(lu**1.5)
        acc["cov_s"].append(ls * w)
        acc["third"].append(ls * np.sqrt(lu))
        done += n
    out = {}
    for key, parts in acc.items():
        x = np.concatenate(parts)
        out[key] = (float(x.mean()), float(x.std(ddof=1) / np.sqrt(x.size)))
    return out


if __name__ == "__main__":
    n_paths = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    spy = int(sys.argv[2]) if len(sys.argv) > 2 else 2000
    result = {name: simulate(p, n_paths, spy, seed=2024 + i) for i, (name, p) in enumerate(SETS.items())}
    print("MOMENT_ORACLES = {")
    for name, vals in result.items():
        print(f"    {name!r}: {{")
        for key, (mean, se) in vals.items():
            print(f"        {key!r}: ({mean!r}, {se!r}),")
        print("    },")
    print("}")
    print(f"# n_paths={n_paths}, steps_per_year={spy}, t={T0}, u={U}, s={S}")
