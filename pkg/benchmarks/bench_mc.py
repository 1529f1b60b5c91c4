"""Compare the numba and numpy path kernels.

Both kernels run on the same normals, so besides timing the script checks
that they agree. Usage::

    python3 benchmarks/bench_mc.py --paths 50000 --repeat 3
"""

from __future__ import annotations

import argparse
import time
import warnings

import numpy as np

from approx_xva import _accel, _kernels, presets
from approx_xva.cir import FellerWarning
from approx_xva.mc import BLOCK_SIZE, McConfig, _block_normals, _step_tables, simulate_paths


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--paths", type=int, default=50_000)
    parser.add_argument("--dt", type=float, default=1 / 250)
    parser.add_argument("--maturity", type=float, default=0.5, choices=(0.5, 2.0))
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    warnings.simplefilter("ignore", FellerWarning)
    sc = presets.table4(args.maturity)
    config = McConfig(n_paths=args.paths, dt=args.dt)

    def run(kernel):
        return lambda: simulate_paths(sc.market, sc.credit, sc.cir1, sc.cir2, 0.3, -0.3, config, kernel=kernel)

    kernels = {"numpy": _kernels.paths_numpy}
    if _accel.HAS_NUMBA:
        # compile (or load from cache) outside the timed region
        simulate_paths(sc.market, sc.credit, sc.cir1, sc.cir2, 0.3, -0.3, McConfig(n_paths=8, dt=args.dt),
                       kernel=_kernels.paths_numba)
        kernels["numba"] = _kernels.paths_numba
    else:
        print("numba unavailable or disabled; timing the numpy kernel only")

    results = {}
    for name, kernel in kernels.items():
        seconds, samples = _time(run(kernel), args.repeat)
        results[name] = samples
        print(f"{name:>6}: {seconds:8.3f} s  ({args.paths / seconds:,.0f} paths/s, T={args.maturity:g}, dt={args.dt:g})")

    # kernel alone on one block of pre-drawn normals, without the RNG cost
    tab = _step_tables(sc.market, 0.0, args.dt)
    z = _block_normals(config.seed, 0, tab["dt"].shape[0], BLOCK_SIZE)
    c1 = np.array([sc.cir1.lambda0, sc.cir1.gamma, sc.cir1.theta, sc.cir1.eta])
    c2 = np.array([sc.cir2.lambda0, sc.cir2.gamma, sc.cir2.theta, sc.cir2.eta])
    bufs = [np.empty(BLOCK_SIZE) for _ in range(3)]
    for name, kernel in kernels.items():
        def block(kernel=kernel):
            kernel(z, sc.market.x, sc.market.sigma, sc.market.kappa, c1, c2, 0.3, -0.3, sc.credit.R1,
                   sc.credit.alpha, tab["dt"], tab["h_int"], tab["disc"], tab["rbar"], tab["tau"], tab["rhat"], *bufs)
        seconds, _ = _time(block, max(args.repeat, 5))
        print(f"{name:>6}: {seconds * 1e3:8.2f} ms per {BLOCK_SIZE}-path block, kernel only")

    if len(results) == 2:
        gap = max(float(np.max(np.abs(getattr(results["numba"], f) - getattr(results["numpy"], f))))
                  for f in ("payoff", "psi", "control"))
        print(f"max per-path difference between backends: {gap:.2e}")


if __name__ == "__main__":
    main()
