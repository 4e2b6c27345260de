"""Small numerical kernels shared across modules."""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

# Gauss-Legendre rule on [-1, 1], used for short intervals where a fixed
# high-order rule is exact to machine precision for the analytic integrands here.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    max_depth: int = 40,
) -> float:
    """Adaptive Simpson quadrature with Richardson correction.

    ``tol`` is an absolute tolerance on the whole interval; it is split in half
    at every bisection. Recursion stops at ``max_depth`` regardless.
    """
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + _simpson_step(
        f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1
    )


def gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> float:
    """Fixed 24-point Gauss-Legendre rule on [a, b]; ``f`` must accept arrays."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return float(half * np.dot(_GL_WEIGHTS, f(mid + half * _GL_NODES)))


def composite_simpson(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, panels: int = 1024) -> float:
    """Composite Simpson rule with ``panels`` Simpson panels (2*panels subintervals)."""
    if a == b:
        return 0.0
    x = np.linspace(a, b, 2 * panels + 1)
    return float(integrate.simpson(f(x), x=x))


def neville_at_zero(h: Sequence[float], s: Sequence[float]) -> float:
    """Value at h=0 of the polynomial interpolating the points (h_j, s_j).

    Used to extrapolate secant slopes over shrinking windows to the limit.
    """
    h = [float(v) for v in h]
    p = [float(v) for v in s]
    n = len(p)
    for level in range(1, n):
        for i in range(n - level):
            # p[i] interpolates points i..i+level after this update
            p[i] = (h[i + level] * p[i] - h[i] * p[i + 1]) / (h[i + level] - h[i])
    return p[0]


def bracket_increasing(func: Callable[[float], float], target: float, start: float = 1.0, limit: int = 400) -> tuple[float, float]:
    """Find [lo, hi] with func(lo) <= target <= func(hi) for increasing ``func`` on [0, inf)."""
    lo, hi = 0.0, start
    for _ in range(limit):
        if func(hi) >= target:
            return lo, hi
        lo, hi = hi, 2.0 * hi
    raise ArithmeticError("could not bracket target")


def is_uniform(x: np.ndarray, rtol: float = 1e-9) -> bool:
    d = np.diff(x)
    return bool(d.size > 0 and np.all(np.abs(d - d[0]) <= rtol * abs(d[0])))


def finite_or_none(value: float) -> float | None:
    return float(value) if math.isfinite(value) else None
