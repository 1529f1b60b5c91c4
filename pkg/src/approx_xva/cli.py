"""Command-line front end: ``price``, ``mc``, ``grid`` and ``tables``."""

from __future__ import annotations

import argparse
import csv
import sys

from . import mc as mc_mod
from . import tables as tables_mod
from .config import ConfigError, load_config
from .xva import ApproxSettings, check_correlations, price_first_order

DEFAULT_RHO_VALUES = "-0.6,-0.4,-0.2,0,0.2,0.4,0.6"
CSV_HEADER = ["rho1", "rho2", "price_approx", "price_mc", "mc_se", "error"]


def _add_common(p, mc_flags=False):
    p.add_argument("--config", required=True, help="INI run configuration")
    p.add_argument("--rho1", type=float, help="override corr.rho1")
    p.add_argument("--rho2", type=float, help="override corr.rho2")
    if mc_flags:
        p.add_argument("--paths", type=int, help="override mc.paths")
        p.add_argument("--dt", type=float, help="override mc.dt")
        p.add_argument("--seed", type=int, help="override mc.seed")
        p.add_argument("--workers", type=int, help="override mc.workers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="approx-xva", description="First-order XVA pricing of a European call.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("price", help="g0, g1, g2 and the first-order price")
    _add_common(p)

    p = sub.add_parser("mc", help="Monte Carlo benchmark price")
    _add_common(p, mc_flags=True)

    p = sub.add_parser("grid", help="approximation error over a correlation grid (CSV)")
    _add_common(p, mc_flags=True)
    p.add_argument("--rho-values", default=DEFAULT_RHO_VALUES,
                   help="comma-separated values; the grid is their square, rho2 outer")
    p.add_argument("--out", required=True, help="CSV output path")

    p = sub.add_parser("tables", help="reproduce the published tables")
    p.add_argument("--config", help="optional INI file; only its [approx] section is used")
    p.add_argument("--freeze-mode", help="override approx.freeze_mode")
    p.add_argument("--moment-mode", help="override approx.moment_mode")
    return parser


def _load(args):
    cfg = load_config(args.config)
    return cfg.with_overrides(
        rho1=args.rho1, rho2=args.rho2,
        paths=getattr(args, "paths", None), dt=getattr(args, "dt", None),
        seed=getattr(args, "seed", None), workers=getattr(args, "workers", None),
    )


def _table(rows) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def cmd_price(args, out) -> int:
    cfg = _load(args)
    b = price_first_order(cfg.market, cfg.credit, cfg.cir1, cfg.cir2, 0.0, cfg.rho1, cfg.rho2, cfg.approx)
    out.write(_table([
        ("g0", f"{b.g0:.4f}"),
        ("g1", f"{b.g1:.4f}"),
        ("g2", f"{b.g2:.4f}"),
        ("rho1", f"{b.rho1:.4f}"),
        ("rho2", f"{b.rho2:.4f}"),
        ("price", f"{b.price:.4f}"),
    ]) + "\n")
    return 0


def cmd_mc(args, out) -> int:
    cfg = _load(args)
    if cfg.mc.n_paths < 2:
        raise ConfigError("mc.paths: need at least 2 paths for a standard error")
    est = mc_mod.estimate_price(cfg.market, cfg.credit, cfg.cir1, cfg.cir2, cfg.rho1, cfg.rho2, cfg.mc)
    out.write(_table([
        ("mean", f"{est.mean:.4f}"),
        ("std_error", f"{est.std_error:.4f}"),
        ("ci95", f"{est.ci95_halfwidth:.4f}"),
        ("paths", str(est.n_paths)),
        ("dt", f"{cfg.mc.dt:.6g}"),
        ("seed", str(cfg.mc.seed)),
        ("control_variate", "on" if cfg.mc.control_variate else "off"),
    ]) + "\n")
    return 0


def parse_rho_values(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--rho-values: not a list of numbers: {text!r}") from None
    return values


def cmd_grid(args, out) -> int:
    cfg = _load(args)
    values = parse_rho_values(args.rho_values)
    grid = [(r1, r2) for r2 in values for r1 in values]
    for r1, r2 in grid:
        try:
            check_correlations(r1, r2)
        except ValueError as exc:
            raise ConfigError(f"--rho-values: {exc}") from None
    if cfg.mc.n_paths < 2:
        raise ConfigError("mc.paths: need at least 2 paths for a standard error")
    try:
        fh = open(args.out, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"--out: cannot write {args.out}: {exc.strerror}") from None
    rows = mc_mod.error_grid(cfg.market, cfg.credit, cfg.cir1, cfg.cir2, grid, cfg.mc, 0.0, cfg.approx)
    with fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow([f"{v:.17e}" for v in (r.rho1, r.rho2, r.price_approx, r.price_mc, r.mc_se, r.error)])
    worst = max((abs(r.error) for r in rows), default=0.0)
    out.write(f"wrote {len(rows)} rows to {args.out}; max |error| = {worst:.4e}\n")
    return 0


def cmd_tables(args, out) -> int:
    settings = ApproxSettings()
    if args.config:
        settings = load_config(args.config).approx
    changes = {}
    if args.freeze_mode:
        changes["freeze"] = args.freeze_mode
    if args.moment_mode:
        changes["moment_mode"] = args.moment_mode
    if changes:
        try:
            settings = ApproxSettings(**{**settings.__dict__, **changes})
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    blocks = [tables_mod.render(title, cells) for title, cells in tables_mod.all_tables(settings).items()]
    out.write("\n\n".join(blocks) + "\n")
    return 0


COMMANDS = {"price": cmd_price, "mc": cmd_mc, "grid": cmd_grid, "tables": cmd_tables}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
