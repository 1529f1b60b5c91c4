"""Reproduction of the published tables, cell by cell against the printed values."""

from __future__ import annotations

from dataclasses import dataclass

from . import cir, presets
from .blackscholes import bs_call
from .xva import ApproxSettings, DEFAULT_SETTINGS, coefficients, g0, price_const_intensity

PUBLISHED_TABLE1 = {
    ("table1-set1", 0.5): 0.9848,
    ("table1-set1", 2.0): 0.9371,
    ("table1-set2", 0.5): 0.9660,
    ("table1-set2", 2.0): 0.7399,
}

PUBLISHED_TABLE4_BS = {0.5: 11.2685, 2.0: 22.3480}
PUBLISHED_TABLE4 = {
    0.5: {"g0": 11.3300, "g1": -0.0071, "g2": 0.0003},
    2.0: {"g0": 22.4224, "g1": -0.0435, "g2": 0.0370},
}

TABLE5_STRIKES = (90.0, 100.0, 110.0)
ALPHAS = (0.0, 0.5, 1.0)
PUBLISHED_TABLE5 = {
    "g0": [[16.3455, 16.4559, 16.5663], [11.2208, 11.2965, 11.3723], [7.4639, 7.5142, 7.5646]],
    "g1": [[-0.0317, -0.0155, 0.0007], [-0.0254, -0.0124, 0.0006], [-0.0193, -0.0094, 0.0004]],
    "g2": [[0.0004, 0.0004, 0.0003], [0.0004, 0.0003, 0.0002], [0.0003, 0.0002, 0.0001]],
}

TABLE6_MONEYNESS = (-0.2, -0.1, 0.0, 0.1, 0.2)
PUBLISHED_TABLE6 = {
    "c_const": {
        0.0: [5.5458, 8.3127, 11.9943, 16.7047, 22.5212],
        0.5: [5.5728, 8.3532, 12.0527, 16.7862, 22.6310],
        1.0: [5.5998, 8.3937, 12.1112, 16.8676, 22.7408],
    },
    "g0": {
        0.0: [5.2034, 7.7995, 11.2539, 15.6736, 21.1312],
        0.5: [5.2307, 7.8405, 11.3130, 15.7561, 21.2423],
        1.0: [5.2581, 7.8815, 11.3722, 15.8385, 21.3535],
    },
}


@dataclass(frozen=True)
class Cell:
    table: str
    label: str
    value: float
    published: float

    @property
    def delta(self) -> float:
        return self.value - self.published


def table1() -> list[Cell]:
    cells = []
    for (name, horizon), published in PUBLISHED_TABLE1.items():
        value = cir.survival_single(presets.CIR_SETS[name], 0.0, horizon)
        cells.append(Cell("1", f"{name} survival to {horizon:g}y", value, published))
    return cells


def table4_bs() -> list[Cell]:
    cells = []
    for T, published in PUBLISHED_TABLE4_BS.items():
        m = presets.table4(T).market
        cells.append(Cell("4", f"T={T:g} c_BS", bs_call(m.x, 0.0, m.bar(m.r, 0.0), m.sigma, T, m.kappa), published))
    return cells


def table4(variant: str = "stated", settings: ApproxSettings = DEFAULT_SETTINGS) -> list[Cell]:
    cells = []
    for T, published in PUBLISHED_TABLE4.items():
        sc = presets.table4(T, variant)
        co = coefficients(sc.market, sc.credit, sc.cir1, sc.cir2, 0.0, settings)
        for name in ("g0", "g1", "g2"):
            cells.append(Cell("4", f"{variant} T={T:g} {name}", getattr(co, name), published[name]))
    return cells


def table5(settings: ApproxSettings = DEFAULT_SETTINGS) -> list[Cell]:
    cells = []
    for i, K in enumerate(TABLE5_STRIKES):
        for j, alpha in enumerate(ALPHAS):
            sc = presets.table5(K, alpha)
            co = coefficients(sc.market, sc.credit, sc.cir1, sc.cir2, 0.0, settings)
            for name in ("g0", "g1", "g2"):
                cells.append(Cell("5", f"K={K:g} alpha={alpha:g} {name}", getattr(co, name), PUBLISHED_TABLE5[name][i][j]))
    return cells


def table6(convention: str = "scaled", settings: ApproxSettings = DEFAULT_SETTINGS) -> list[Cell]:
    """``c^const`` uses the printed constant-intensity form (growing terminal factor)."""
    lam1, lam2 = presets.table6_constant_intensities()
    cells = []
    for alpha in ALPHAS:
        for k, m in enumerate(TABLE6_MONEYNESS):
            sc = presets.table6(m, alpha, convention)
            const = price_const_intensity(sc.market, sc.credit, lam1, lam2, 0.0, terminal_sign=1, settings=settings)
            zeroth = g0(sc.market, sc.credit, sc.cir1, sc.cir2, 0.0, settings)
            cells.append(Cell("6", f"alpha={alpha:g} m={m:+.1f} c_const", const, PUBLISHED_TABLE6["c_const"][alpha][k]))
            cells.append(Cell("6", f"alpha={alpha:g} m={m:+.1f} g0", zeroth, PUBLISHED_TABLE6["g0"][alpha][k]))
    return cells


def all_tables(settings: ApproxSettings = DEFAULT_SETTINGS) -> dict:
    return {
        "Table 1: survival probabilities": table1(),
        "Table 4: default-free prices": table4_bs(),
        "Table 4: coefficients, stated rates (L1 = 0.6 assumed)": table4("stated", settings),
        "Table 4: coefficients, fitted configuration": table4("fitted", settings),
        "Table 5: strikes and collateralization": table5(settings),
        "Table 6: moneyness and collateralization": table6("scaled", settings),
    }


def render(title: str, cells: list[Cell]) -> str:
    width = max(len(c.label) for c in cells) if cells else 10
    lines = [title, f"{'cell':<{width}}  {'value':>10}  {'published':>10}  {'delta':>10}"]
    for c in cells:
        lines.append(f"{c.label:<{width}}  {c.value:>10.4f}  {c.published:>10.4f}  {c.delta:>+10.4f}")
    return "\n".join(lines)
