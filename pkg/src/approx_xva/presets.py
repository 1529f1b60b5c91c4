"""Named parameter sets used by the published tables.

Two Table 4 variants are kept. ``stated`` uses the rates quoted with the
experiment (``r = h = 0.001``) and borrows ``L1 = L2 = 0.6`` from the strike
study because no loss is quoted there. ``fitted`` is the configuration that
matches the printed ``g0`` values: the strike-study rates with ``L1 = 0.4``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .blackscholes import MarketParams
from .cir import CirParams
from .xva import CreditParams

CIR_SETS = {
    "table1-set1": CirParams(lambda0=0.03, gamma=0.02, theta=0.161, eta=0.08),
    "table1-set2": CirParams(lambda0=0.035, gamma=0.35, theta=0.45, eta=0.15),
}

RATE_SETS = {
    "table4-rates": dict(r=0.001, h=0.001, r_phi=0.005, r_c=0.002),
    "table5-rates": dict(r=0.001, h=0.005, r_phi=0.005, r_c=0.002),
}

SIGMA = 0.4
STRIKE = 100.0


@dataclass(frozen=True)
class Scenario:
    market: MarketParams
    credit: CreditParams
    cir1: CirParams
    cir2: CirParams


def counterparty() -> CirParams:
    return CIR_SETS["table1-set1"]


def investor() -> CirParams:
    return CIR_SETS["table1-set2"]


def table4(T: float, variant: str = "stated") -> Scenario:
    """At-the-money call, Table 1 intensities, ``alpha = 0.5``."""
    if variant == "stated":
        rates, credit = RATE_SETS["table4-rates"], CreditParams(alpha=0.5, L1=0.6, L2=0.6)
    elif variant == "fitted":
        rates, credit = RATE_SETS["table5-rates"], CreditParams(alpha=0.5, L1=0.4, L2=0.4)
    else:
        raise ValueError(f"unknown table4 variant {variant!r}")
    market = MarketParams.from_prices(100.0, STRIKE, SIGMA, T, **rates)
    return Scenario(market, credit, counterparty(), investor())


def table5(strike: float, alpha: float) -> Scenario:
    """Strike/collateral study: shifted initial intensities, ``T = 0.5``."""
    market = MarketParams.from_prices(100.0, strike, SIGMA, 0.5, **RATE_SETS["table5-rates"])
    cir1 = replace(counterparty(), lambda0=0.04)
    cir2 = replace(investor(), lambda0=0.02)
    return Scenario(market, CreditParams(alpha=alpha, L1=0.6, L2=0.6), cir1, cir2)


MONEYNESS_CONVENTIONS = ("scaled", "log")


def table6(m: float, alpha: float, convention: str = "scaled") -> Scenario:
    """Moneyness study at ``K = 100``, ``T = 0.5``.

    ``convention="scaled"`` sets ``x - kappa = m sqrt(T)``, ``"log"`` sets
    ``x - kappa = m``.
    """
    T = 0.5
    if convention == "scaled":
        gap = m * math.sqrt(T)
    elif convention == "log":
        gap = m
    else:
        raise ValueError(f"unknown moneyness convention {convention!r}; expected one of {MONEYNESS_CONVENTIONS}")
    kappa = math.log(STRIKE)
    market = MarketParams(x=kappa + gap, sigma=SIGMA, kappa=kappa, T=T, **RATE_SETS["table5-rates"])
    return Scenario(market, CreditParams(alpha=alpha, L1=0.6, L2=0.6), counterparty(), investor())


def table6_constant_intensities() -> tuple:
    """Constant intensities behind the ``c^const`` row (the Table 1 initial values)."""
    return counterparty().lambda0, investor().lambda0
