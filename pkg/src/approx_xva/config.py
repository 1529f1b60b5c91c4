"""INI run configuration.

Sections ``market``, ``credit``, ``cir1``, ``cir2`` and ``corr`` are
mandatory; ``mc`` and ``approx`` fall back to desk-scale defaults. A rate
may be a single number or comma-separated levels with a matching
``<name>_knots`` key, for example::

    [market]
    r = 0.001, 0.002
    r_knots = 0.25
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace

from .blackscholes import MarketParams
from .cir import CirParams
from .curves import RateCurve
from .mc import McConfig
from .xva import ApproxSettings, CreditParams, check_correlations


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending key path."""


MARKET_KEYS = {"s0", "x0", "sigma", "strike", "maturity", "r", "r_phi", "r_c", "h",
               "r_knots", "r_phi_knots", "r_c_knots", "h_knots"}
SECTION_KEYS = {
    "market": MARKET_KEYS,
    "credit": {"alpha", "l1", "l2"},
    "cir1": {"lambda0", "gamma", "theta", "eta"},
    "cir2": {"lambda0", "gamma", "theta", "eta"},
    "corr": {"rho1", "rho2"},
    "mc": {"paths", "dt", "seed", "control_variate", "workers"},
    "approx": {"quad_rel_tol", "freeze_mode", "moment_mode"},
}
KEY_NAMES = {"l1": "L1", "l2": "L2"}


@dataclass(frozen=True)
class RunConfig:
    market: MarketParams
    credit: CreditParams
    cir1: CirParams
    cir2: CirParams
    rho1: float = 0.0
    rho2: float = 0.0
    mc: McConfig = field(default_factory=McConfig)
    approx: ApproxSettings = field(default_factory=ApproxSettings)

    def with_overrides(self, rho1=None, rho2=None, paths=None, dt=None, seed=None, workers=None) -> "RunConfig":
        cfg = self
        if rho1 is not None or rho2 is not None:
            r1 = self.rho1 if rho1 is None else rho1
            r2 = self.rho2 if rho2 is None else rho2
            _guard("corr", lambda: check_correlations(r1, r2))
            cfg = replace(cfg, rho1=r1, rho2=r2)
        mc_changes = {k: v for k, v in dict(n_paths=paths, dt=dt, seed=seed, workers=workers).items() if v is not None}
        if mc_changes:
            cfg = replace(cfg, mc=_guard("mc", lambda: replace(self.mc, **mc_changes)))
        return cfg


def _guard(section, build):
    try:
        return build()
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        msg = str(exc)
        for prefix in ("market.", "credit.", "cir.", "mc.", "approx."):
            if msg.startswith(prefix):
                if prefix == "cir.":
                    msg = section + "." + msg[len(prefix):]
                raise ConfigError(msg) from exc
        raise ConfigError(f"{section}: {msg}") from exc


def _float(section, key, raw) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{section}.{KEY_NAMES.get(key, key)}: not a number: {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{section}.{KEY_NAMES.get(key, key)}: must be finite, got {raw!r}")
    return value


def _floats(section, key, raw) -> tuple:
    return tuple(_float(section, key, part) for part in raw.split(",") if part.strip())


def _require(parser, section, key) -> str:
    if not parser.has_section(section):
        raise ConfigError(f"{section}: missing section")
    if not parser.has_option(section, key):
        raise ConfigError(f"{section}.{KEY_NAMES.get(key, key)}: missing key")
    return parser.get(section, key)


def _curve(parser, name) -> RateCurve:
    levels = _floats("market", name, _require(parser, "market", name))
    knots_key = f"{name}_knots"
    knots = _floats("market", knots_key, parser.get("market", knots_key)) if parser.has_option("market", knots_key) else ()
    return _guard("market", lambda: _rate_curve(name, levels, knots))


def _rate_curve(name, levels, knots):
    try:
        return RateCurve(levels, knots)
    except ValueError as exc:
        raise ConfigError(f"market.{name}: {exc}") from exc


def _bool(section, key, raw) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{section}.{key}: not a boolean: {raw!r}")


def _int(section, key, raw) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise ConfigError(f"{section}.{key}: not an integer: {raw!r}") from None


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"syntax: {exc}") from exc
    for section in parser.sections():
        if section not in SECTION_KEYS:
            raise ConfigError(f"{section}: unknown section")
        for key in parser.options(section):
            if key not in SECTION_KEYS[section]:
                raise ConfigError(f"{section}.{key}: unknown key")

    has_s0 = parser.has_option("market", "s0") if parser.has_section("market") else False
    has_x0 = parser.has_option("market", "x0") if parser.has_section("market") else False
    if has_s0 == has_x0:
        raise ConfigError("market.s0: give exactly one of s0 or x0")
    if has_s0:
        s0 = _float("market", "s0", parser.get("market", "s0"))
        if s0 <= 0:
            raise ConfigError(f"market.s0: must be > 0, got {s0}")
        x0 = math.log(s0)
    else:
        x0 = _float("market", "x0", parser.get("market", "x0"))
    strike = _float("market", "strike", _require(parser, "market", "strike"))
    if strike <= 0:
        raise ConfigError(f"market.strike: must be > 0, got {strike}")
    sigma = _float("market", "sigma", _require(parser, "market", "sigma"))
    maturity = _float("market", "maturity", _require(parser, "market", "maturity"))
    curves = {name: _curve(parser, name) for name in ("r", "r_phi", "r_c", "h")}
    market = _guard("market", lambda: MarketParams(x0, sigma, math.log(strike), maturity, **curves))

    credit_vals = {KEY_NAMES[k] if k in KEY_NAMES else k: _float("credit", k, _require(parser, "credit", k))
                   for k in ("alpha", "l1", "l2")}
    credit = _guard("credit", lambda: CreditParams(**credit_vals))

    cirs = []
    for section in ("cir1", "cir2"):
        vals = {k: _float(section, k, _require(parser, section, k)) for k in ("lambda0", "gamma", "theta", "eta")}
        cirs.append(_guard(section, lambda: CirParams(**vals)))

    rho1 = _float("corr", "rho1", _require(parser, "corr", "rho1"))
    rho2 = _float("corr", "rho2", _require(parser, "corr", "rho2"))
    _guard("corr", lambda: check_correlations(rho1, rho2))

    mc_kwargs = {}
    if parser.has_section("mc"):
        sec = parser["mc"]
        if "paths" in sec:
            mc_kwargs["n_paths"] = _int("mc", "paths", sec["paths"])
        if "dt" in sec:
            mc_kwargs["dt"] = _float("mc", "dt", sec["dt"])
        if "seed" in sec:
            mc_kwargs["seed"] = _int("mc", "seed", sec["seed"])
        if "control_variate" in sec:
            mc_kwargs["control_variate"] = _bool("mc", "control_variate", sec["control_variate"])
        if "workers" in sec:
            mc_kwargs["workers"] = _int("mc", "workers", sec["workers"])
    mc = _guard("mc", lambda: McConfig(**mc_kwargs))

    approx_kwargs = {}
    if parser.has_section("approx"):
        sec = parser["approx"]
        if "quad_rel_tol" in sec:
            approx_kwargs["rel_tol"] = _float("approx", "quad_rel_tol", sec["quad_rel_tol"])
        if "freeze_mode" in sec:
            approx_kwargs["freeze"] = sec["freeze_mode"].strip()
        if "moment_mode" in sec:
            approx_kwargs["moment_mode"] = sec["moment_mode"].strip()
    approx = _guard("approx", lambda: ApproxSettings(**approx_kwargs))

    return RunConfig(market, credit, cirs[0], cirs[1], rho1, rho2, mc, approx)


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from exc
    return parse_config(text)
