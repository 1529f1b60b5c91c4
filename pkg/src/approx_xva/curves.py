"""Deterministic rate curves."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class RateCurve:
    """Piecewise-constant rate, right-continuous.

    ``levels[i]`` applies on ``[knots[i-1], knots[i])`` with ``knots[-1]``
    implicitly ``-inf`` and the last level extended to ``+inf``. Integrals are
    exact sums of panel widths times levels.
    """

    levels: tuple
    knots: tuple = ()

    def __post_init__(self):
        levels = tuple(float(v) for v in np.atleast_1d(self.levels))
        knots = tuple(float(v) for v in np.atleast_1d(self.knots)) if len(np.atleast_1d(self.knots)) else ()
        if len(levels) != len(knots) + 1:
            raise ValueError(f"need len(levels) == len(knots) + 1, got {len(levels)} and {len(knots)}")
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise ValueError("knots must be strictly increasing")
        if not all(np.isfinite(levels)):
            raise ValueError("rate levels must be finite")
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "knots", knots)

    @classmethod
    def flat(cls, level: float) -> "RateCurve":
        return cls((float(level),))

    @classmethod
    def coerce(cls, value) -> "RateCurve":
        if isinstance(value, RateCurve):
            return value
        return cls.flat(value)

    @property
    def is_flat(self) -> bool:
        return not self.knots

    def __call__(self, t):
        idx = np.searchsorted(self.knots, t, side="right")
        out = np.asarray(self.levels)[idx]
        return float(out) if np.ndim(out) == 0 else out

    def _antiderivative(self, t):
        # F(t) = int_0^t, valid for negative t as well
        t = np.asarray(t, dtype=float)
        levels = np.asarray(self.levels)
        if self.is_flat:
            return levels[0] * t
        total = np.zeros_like(t)
        bounds = np.concatenate(([-np.inf], np.asarray(self.knots), [np.inf]))
        for lev, lo, hi in zip(levels, bounds[:-1], bounds[1:]):
            a = np.clip(0.0, lo, hi)
            b = np.clip(t, lo, hi)
            total = total + lev * (b - a)
        return total

    def integral(self, a, b):
        """Exact ``int_a^b v(u) du`` (vectorised over ``a`` and ``b``)."""
        out = self._antiderivative(b) - self._antiderivative(a)
        return float(out) if np.ndim(out) == 0 else out

    def describe(self) -> str:
        if self.is_flat:
            return f"{self.levels[0]:g}"
        parts = [f"{lev:g}" for lev in self.levels]
        return " | ".join(parts) + f" (knots {', '.join(f'{k:g}' for k in self.knots)})"
