"""Sampled real functions on a one-dimensional grid."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import OutOfRange
from .numerics import is_uniform, neville_at_zero


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values ``y`` at strictly increasing nodes ``x``.

    Off-grid evaluation goes through ``exact`` when supplied (an array-aware
    callable), otherwise through a monotone cubic (PCHIP) interpolant, which
    cannot overshoot and so does not fabricate concavity violations.
    """

    x: np.ndarray
    y: np.ndarray
    exact: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        x, y = _frozen(self.x), _frozen(self.y)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("x and y must be one-dimensional with equal length")
        if x.size < 3:
            raise ValueError("need at least 3 nodes")
        if np.any(np.diff(x) <= 0):
            raise ValueError("nodes must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_callable(cls, func: Callable, x, keep_exact: bool = True) -> "GridFunction":
        x = np.asarray(x, dtype=float)
        y = np.asarray(func(x), dtype=float)
        return cls(x, y, func if keep_exact else None)

    @cached_property
    def interpolant(self) -> PchipInterpolator:
        return PchipInterpolator(self.x, self.y, extrapolate=False)

    @cached_property
    def uniform(self) -> bool:
        return is_uniform(self.x)

    @property
    def a(self) -> float:
        return float(self.x[0])

    @property
    def b(self) -> float:
        return float(self.x[-1])

    def __len__(self) -> int:
        return self.x.size

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < self.x[0] - 1e-12 * max(1.0, abs(self.x[0]))) or np.any(
            t_arr > self.x[-1] + 1e-12 * max(1.0, abs(self.x[-1]))
        ):
            raise OutOfRange("evaluation point outside the grid")
        if self.exact is not None:
            out = np.asarray(self.exact(t_arr), dtype=float)
        else:
            out = self.interpolant(np.clip(t_arr, self.x[0], self.x[-1]))
        return float(out) if out.ndim == 0 else out

    def node_index(self, t: float, rtol: float = 1e-12) -> int | None:
        """Index of the node equal to ``t`` up to ``rtol``, else None."""
        i = int(np.searchsorted(self.x, t))
        for j in (i - 1, i):
            if 0 <= j < self.x.size and abs(self.x[j] - t) <= rtol * max(1.0, abs(t)):
                return j
        return None

    def restrict(self, a: float, b: float) -> "GridFunction":
        mask = (self.x >= a - 1e-12 * max(1.0, abs(a))) & (self.x <= b + 1e-12 * max(1.0, abs(b)))
        return GridFunction(self.x[mask], self.y[mask], self.exact)

    def map(self, func: Callable[[np.ndarray], np.ndarray]) -> "GridFunction":
        """Pointwise transform of the values; the exact callable is composed as well."""
        exact = None if self.exact is None else (lambda t, e=self.exact: func(np.asarray(e(t))))
        return GridFunction(self.x, func(self.y), exact)


@dataclass(frozen=True)
class SlopeEstimate:
    """One-sided derivative extrapolated from secants over shrinking windows."""

    value: float
    side: str
    window: float
    secants: tuple[float, ...]


def one_sided_slope(f: GridFunction, t: float, side: str, windows: int = 4) -> SlopeEstimate:
    """Left or right derivative of ``f`` at ``t``.

    Secant slopes over windows of 1, 2, 4, 8 grid cells on the requested side
    are extrapolated to zero width (Neville). At a grid node only node values
    are used, so a kink sitting on a node yields distinct one-sided slopes.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if not (f.x[0] <= t <= f.x[-1]):
        raise OutOfRange(f"{t} outside grid range")
    i = f.node_index(t)
    sgn = 1 if side == "right" else -1
    hs, ss = [], []
    if i is not None:
        for j in range(windows):
            m = 2**j
            k = i + sgn * m
            if not 0 <= k < f.x.size:
                break
            h = abs(f.x[k] - f.x[i])
            hs.append(h)
            ss.append(sgn * (f.y[k] - f.y[i]) / h)
        fx = f.y[i]
    else:
        c = int(np.searchsorted(f.x, t))
        cell = f.x[c] - f.x[c - 1]
        fx = f(t)
        for j in range(windows):
            h = cell * 2**j
            u = t + sgn * h
            if not f.x[0] <= u <= f.x[-1]:
                break
            hs.append(h)
            ss.append(sgn * (f(u) - fx) / h)
    if not hs:
        raise OutOfRange(f"no {side} neighbourhood of {t} inside the grid")
    # extrapolate from the smallest windows first
    value = neville_at_zero(hs[::-1], ss[::-1])
    return SlopeEstimate(value, side, float(hs[0]), tuple(float(s) for s in ss))
