"""Weak second-order differential inequalities f'' <= g(f) on sampled functions.

Three equivalent senses are certified independently:

* pointwise: the upper second derivative limsup_h d_h^2 f(x) is at most g(f(x));
* viscosity: every smooth function touching f from below at x has second
  derivative at most g(f(x)) there;
* distributional: the integral of f phi'' is at most the integral of g(f) phi
  for every nonnegative test function phi.

A grid cannot realize true limits, so every check carries an explicit slack
``tol(h) = atol + 10 * h * Lip(g o f)`` (plus a rounding allowance) and
reports it next to the residual. Residuals are signed: positive means the
inequality is violated by that much.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.ndimage import maximum_filter1d

from .errors import OutOfRange, WindowTooSmall
from .grid import GridFunction
from .numerics import finite_or_none

ATOL = 1e-6
LIP_FACTOR = 10.0
H_LEVELS = 12
FINAL_STEPS = 4
VISCOSITY_WINDOWS = (5, 9, 17)
BUMP_SPACINGS = (2, 4, 8)
_EPS = float(np.finfo(float).eps)

RHS = Callable[[np.ndarray], np.ndarray]


def constant(c: float) -> RHS:
    """Right-hand side g identically equal to ``c``."""
    return lambda y: np.full(np.shape(y), float(c))


def profile_rhs(K: float, N: int) -> RHS:
    """g(psi) = -K N/(N-1) psi^((2-N)/N): the sharp bound for psi = I^(N/(N-1))."""
    coef = -K * N / (N - 1)
    expo = (2.0 - N) / N

    def g(y):
        y = np.asarray(y, dtype=float)
        if coef == 0.0:
            return np.zeros(y.shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            return coef * np.power(y, expo) if expo != 0 else np.full(y.shape, coef)

    return g


@dataclass(frozen=True)
class D2Estimate:
    """Upper (or lower) second derivative estimated along a shrinking h-schedule.

    ``value`` is the max (min for the lower derivative) over the final steps,
    ``interval`` spans those steps, and ``trend`` classifies their behaviour:
    ``converged``, ``unbounded_above`` or ``unbounded_below``.
    """

    value: float
    interval: tuple[float, float]
    trend: str
    order: float | None
    h_schedule: tuple[float, ...]
    estimates: tuple[float, ...]


@dataclass(frozen=True)
class WeakIneqReport:
    """Outcome of a certificate.

    ``worst_residual`` and ``tolerance`` are taken at the grid point with the
    largest excess residual - tolerance, so passing is exactly
    ``worst_residual <= tolerance``.
    """

    sense: str
    passed: bool
    worst_residual: float
    worst_location: int
    tolerance: float
    h_schedule: tuple[float, ...]
    direction: str = "upper"
    residuals: np.ndarray = field(default=None, repr=False)
    tolerances: np.ndarray = field(default=None, repr=False)
    locations: np.ndarray = field(default=None, repr=False)
    notes: tuple[str, ...] = ()

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    @property
    def point_verdicts(self) -> np.ndarray:
        return self.residuals <= self.tolerances

    def to_dict(self) -> dict:
        return {
            "sense": self.sense,
            "verdict": self.verdict,
            "worst_residual": finite_or_none(self.worst_residual),
            "worst_location": self.worst_location,
            "tolerance": finite_or_none(self.tolerance),
            "h_schedule": [float(h) for h in self.h_schedule],
            "direction": self.direction,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _as_grid(f) -> GridFunction:
    if isinstance(f, GridFunction):
        return f
    raise TypeError("expected a GridFunction")


def _value(f: GridFunction, t: float) -> float:
    i = f.node_index(t)
    return float(f.y[i]) if i is not None else float(f(t))


def second_difference(f: GridFunction, x: float, h: float) -> float:
    """d_h^2 f(x) = (f(x+h) + f(x-h) - 2 f(x)) / h^2."""
    if h <= 0:
        raise ValueError("h must be positive")
    if x - h < f.a - 1e-12 * max(1.0, abs(f.a)) or x + h > f.b + 1e-12 * max(1.0, abs(f.b)):
        raise OutOfRange(f"x +- h = {x} +- {h} leaves [{f.a}, {f.b}]")
    return (_value(f, x + h) + _value(f, x - h) - 2.0 * _value(f, x)) / (h * h)


def _roundoff_floor(f: GridFunction) -> float:
    """Smallest h whose second difference carries rounding error below 1% of ATOL."""
    scale = max(float(np.max(np.abs(f.y))), 1e-300)
    return math.sqrt(400.0 * _EPS * scale / ATOL)


def _d2_table(f: GridFunction, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Second differences at nodes ``idx`` along each node's h-schedule.

    Rows are nodes, columns schedule levels ordered by decreasing h; unused
    cells are NaN. Sampled uniform grids use steps of 2^j cells (so every
    evaluation hits a node) from the largest power of two below n/8 down to one
    cell. Otherwise the schedule is h0 2^-j, j = 0..12, h0 = min(width/8,
    distance to the boundary), floored at the local spacing (interpolated data)
    or at the rounding floor (exact callables).
    """
    x, y = f.x, f.y
    n = x.size
    if f.exact is None and f.uniform:
        dx = (x[-1] - x[0]) / (n - 1)
        top = max(1, 2 ** int(math.floor(math.log2(max((n - 1) / 8.0, 1.0)))))
        ms = []
        m = top
        while m >= 1:
            ms.append(m)
            m //= 2
        H = np.full((idx.size, len(ms)), np.nan)
        D = np.full((idx.size, len(ms)), np.nan)
        room = np.minimum(idx, n - 1 - idx)
        for c, m in enumerate(ms):
            ok = room >= m
            i = idx[ok]
            H[ok, c] = m * dx
            D[ok, c] = (y[i + m] + y[i - m] - 2.0 * y[i]) / (m * dx) ** 2
        return H, D
    width = x[-1] - x[0]
    xi = x[idx]
    h0 = np.minimum(width / 8.0, np.minimum(xi - x[0], x[-1] - xi))
    H = h0[:, None] * 2.0 ** -np.arange(H_LEVELS + 1)[None, :]
    if f.exact is None:
        left = np.diff(x)[np.maximum(idx - 1, 0)]
        right = np.diff(x)[np.minimum(idx, n - 2)]
        floor = np.maximum(left, right)[:, None] * (1 - 1e-9)
    else:
        floor = _roundoff_floor(f)
    H = np.where(H >= floor, H, np.nan)
    ok = ~np.isnan(H)
    D = np.full(H.shape, np.nan)
    rows, cols = np.nonzero(ok)
    h = H[rows, cols]
    c = xi[rows]
    plus = np.minimum(c + h, x[-1])
    minus = np.maximum(c - h, x[0])
    D[rows, cols] = (np.asarray(f(plus)) + np.asarray(f(minus)) - 2.0 * y[idx][rows]) / h**2
    return H, D


def _final_steps(H_row: np.ndarray, D_row: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ok = ~np.isnan(D_row)
    return H_row[ok][-FINAL_STEPS:], D_row[ok][-FINAL_STEPS:]


def _trend(est: np.ndarray) -> tuple[str, float | None]:
    if est.size >= 3:
        ratios = est[1:] / np.where(est[:-1] == 0, np.nan, est[:-1])
        if np.all(ratios >= 1.5) and abs(est[-1]) > 1.0:
            return ("unbounded_above" if est[-1] > 0 else "unbounded_below"), None
        d = np.diff(est)
        if abs(d[-1]) > 0 and abs(d[-2]) > 0:
            return "converged", float(math.log2(abs(d[-2] / d[-1])))
    return "converged", None


def _estimate(f: GridFunction, x: float, lower: bool) -> D2Estimate:
    i = f.node_index(x)
    if i is None or i in (0, f.x.size - 1):
        if not (f.a < x < f.b):
            raise OutOfRange(f"{x} is not interior to [{f.a}, {f.b}]")
        if i is None:
            # off-grid point: insert it as a node of a refined function
            xs = np.sort(np.append(f.x, x))
            g = GridFunction(xs, np.asarray(f(xs)), f.exact)
            i = g.node_index(x)
            f = g if f.exact is not None else GridFunction(xs, np.asarray(f(xs)), lambda t, p=f: p(t))
    H, D = _d2_table(f, np.array([i]))
    hs, est = _final_steps(H[0], D[0])
    if est.size == 0:
        raise OutOfRange(f"no admissible step at {x}")
    trend, order = _trend(est)
    value = float(est.min() if lower else est.max())
    full_h = H[0][~np.isnan(H[0])]
    full_d = D[0][~np.isnan(D[0])]
    return D2Estimate(value, (float(est.min()), float(est.max())), trend, order, tuple(map(float, full_h)), tuple(map(float, full_d)))


def upper_D2(f: GridFunction, x: float) -> D2Estimate:
    """Upper second derivative: max of d_h^2 f(x) over the final steps of the h-schedule."""
    return _estimate(_as_grid(f), x, lower=False)


def lower_D2(f: GridFunction, x: float) -> D2Estimate:
    """Lower second derivative: min of d_h^2 f(x) over the final steps of the h-schedule."""
    return _estimate(_as_grid(f), x, lower=True)


def _local_lipschitz(x: np.ndarray, gv: np.ndarray, centers: np.ndarray, radius: np.ndarray) -> np.ndarray:
    """Max |slope| of the sampled g o f over cells meeting [c - r, c + r]."""
    with np.errstate(invalid="ignore"):
        slopes = np.abs(np.diff(gv) / np.diff(x))
    slopes = np.where(np.isfinite(slopes), slopes, 0.0)
    prefix_cells = slopes.size
    out = np.empty(centers.size)
    lo = np.searchsorted(x, centers - radius, side="right") - 1
    hi = np.searchsorted(x, centers + radius, side="left")
    lo = np.clip(lo, 0, prefix_cells - 1)
    hi = np.clip(hi, 1, prefix_cells)
    for k in range(centers.size):
        out[k] = slopes[lo[k] : max(hi[k], lo[k] + 1)].max()
    return out


def _interior(f: GridFunction, window: tuple[float, float] | None) -> np.ndarray:
    idx = np.arange(1, f.x.size - 1)
    if window is not None:
        a, b = window
        idx = idx[(f.x[idx] >= a) & (f.x[idx] <= b)]
    return idx


def _report(sense, residual, tol, locs, hs, direction, notes) -> WeakIneqReport:
    excess = residual - tol
    bad = ~np.isfinite(excess)
    if np.any(bad & ~np.isnan(residual)):
        excess = np.where(np.isposinf(residual), np.inf, excess)
    valid = ~np.isnan(excess)
    if not np.any(valid):
        return WeakIneqReport(sense, True, -math.inf, -1, ATOL, tuple(hs), direction, residual, tol, locs, tuple(notes) + ("no admissible points",))
    k = int(np.nanargmax(excess))
    passed = bool(np.nanmax(excess) <= 0.0)
    return WeakIneqReport(
        sense,
        passed,
        float(residual[k]),
        int(locs[k]),
        float(tol[k]),
        tuple(float(h) for h in hs),
        direction,
        residual,
        tol,
        locs,
        tuple(notes),
    )


def check_pointwise(
    f: GridFunction,
    g: RHS,
    *,
    lower: bool = False,
    atol: float = ATOL,
    window: tuple[float, float] | None = None,
) -> WeakIneqReport:
    """Certify upper_D2 f <= g(f) at every interior node (or, with ``lower``,
    the reverse inequality upper_D2 f >= g(f) for supersolutions)."""
    f = _as_grid(f)
    idx = _interior(f, window)
    H, D = _d2_table(f, idx)
    gv = np.asarray(g(f.y), dtype=float)
    residual = np.full(idx.size, np.nan)
    tol = np.full(idx.size, np.nan)
    hJ = np.full(idx.size, np.nan)
    h0 = np.full(idx.size, np.nan)
    scale = float(np.max(np.abs(f.y)))
    for r in range(idx.size):
        hs, est = _final_steps(H[r], D[r])
        if est.size == 0 or not np.isfinite(gv[idx[r]]):
            continue
        value = est.max()
        residual[r] = (value - gv[idx[r]]) if not lower else (gv[idx[r]] - value)
        hJ[r] = hs[-1]
        h0[r] = np.nanmax(H[r])
        tol[r] = atol + 8.0 * _EPS * scale / hs[-1] ** 2
    ok = ~np.isnan(residual)
    lip = np.zeros(idx.size)
    if np.any(ok):
        lip[ok] = _local_lipschitz(f.x, gv, f.x[idx[ok]], h0[ok])
    tol = tol + LIP_FACTOR * hJ * lip
    notes = ["interior nodes of the sampled compact window only"]
    if f.exact is None and not f.uniform:
        notes.append("off-grid values interpolated (PCHIP); interpolation may contribute to residuals")
    if np.any(~ok):
        notes.append(f"{int((~ok).sum())} nodes skipped (g(f) not finite or no admissible step)")
    hs_all = H[~np.all(np.isnan(H), axis=1)]
    schedule = np.nanmax(hs_all, axis=0) if hs_all.size else np.array([])
    return _report("pointwise", residual, tol, idx, schedule[~np.isnan(schedule)], "lower" if lower else "upper", notes)


def max_touching_curvature(f: GridFunction, idx: np.ndarray, half: int) -> tuple[np.ndarray, np.ndarray]:
    """Largest a such that some quadratic with second derivative a touches f
    from below at node i (equality at i, below at the other window nodes).

    Returns (a_max, window radius) per node. The constraint set is an LP in
    (a, b), the slope b free; its optimum lies where an increasing and a
    decreasing constraint line cross, and all such crossings are enumerated.
    """
    x, y = f.x, f.y
    n = x.size
    offs_l = -np.arange(1, half + 1)
    offs_r = np.arange(1, half + 1)

    def lines(offs):
        j = idx[:, None] + offs[None, :]
        valid = (j >= 0) & (j < n)
        jj = np.clip(j, 0, n - 1)
        d = x[jj] - x[idx][:, None]
        df = y[jj] - y[idx][:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            alpha = np.where(valid, 2.0 * df / d**2, np.inf)
            beta = np.where(valid, 2.0 / d, 0.0)
        return alpha, beta, np.where(valid, np.abs(d), 0.0)

    aL, bL, dL = lines(offs_l)
    aR, bR, dR = lines(offs_r)
    with np.errstate(divide="ignore", invalid="ignore"):
        b = (aL[:, :, None] - aR[:, None, :]) / (bL[:, :, None] - bR[:, None, :])
    b = np.where(np.isfinite(b), b, np.nan)
    alpha = np.concatenate([aL, aR], axis=1)
    beta = np.concatenate([bL, bR], axis=1)
    # a(b) = min over lines of alpha - beta b, for every candidate b
    cand = b.reshape(idx.size, -1)
    vals = alpha[:, None, :] - beta[:, None, :] * cand[:, :, None]
    env = np.min(vals, axis=2)
    env = np.where(np.isnan(cand), -np.inf, env)
    a_max = env.max(axis=1)
    radius = np.maximum(dL.max(axis=1), dR.max(axis=1))
    return a_max, radius


def check_viscosity(
    f: GridFunction,
    g: RHS,
    *,
    atol: float = ATOL,
    windows: Sequence[int] = VISCOSITY_WINDOWS,
    window: tuple[float, float] | None = None,
) -> WeakIneqReport:
    """Touching-quadratic test over windows of 5, 9 and 17 nodes.

    A node passes when, in every window, the steepest quadratic touching f
    from below has second derivative at most g(f) + tol.
    """
    f = _as_grid(f)
    idx = _interior(f, window)
    gv = np.asarray(g(f.y), dtype=float)
    scale = float(np.max(np.abs(f.y)))
    best_res = np.full(idx.size, -np.inf)
    best_tol = np.full(idx.size, ATOL)
    best_ex = np.full(idx.size, -np.inf)
    radii = []
    for w in windows:
        half = (w - 1) // 2
        a_max, radius = max_touching_curvature(f, idx, half)
        res = a_max - gv[idx]
        spacing = np.minimum(np.diff(f.x)[np.clip(idx - 1, 0, None)], np.diff(f.x)[np.clip(idx, None, f.x.size - 2)])
        lip = _local_lipschitz(f.x, gv, f.x[idx], radius)
        tol = atol + LIP_FACTOR * radius * lip + 8.0 * _EPS * scale / spacing**2
        ex = res - tol
        upd = ex > best_ex
        best_ex = np.where(upd, ex, best_ex)
        best_res = np.where(upd, res, best_res)
        best_tol = np.where(upd, tol, best_tol)
        radii.append(float(np.median(radius)))
    finite = np.isfinite(gv[idx])
    best_res = np.where(finite, best_res, np.nan)
    notes = ["maximal touching quadratic per window; windows truncated at the boundary"]
    if not np.all(finite):
        notes.append(f"{int((~finite).sum())} nodes skipped (g(f) not finite)")
    return _report("viscosity", best_res, best_tol, idx, radii, "upper", notes)


def _bspline_kernels(m: int, dx: float) -> tuple[np.ndarray, np.ndarray]:
    """Simpson-weighted samples of a unit-mass cubic B-spline bump with knot
    spacing m*dx (support 4m cells) and of its second derivative."""
    s = m * dx
    u = np.arange(-2 * m, 2 * m + 1) / m
    au = np.abs(u)
    B = np.where(au < 1, 2.0 / 3.0 - au**2 + 0.5 * au**3, np.where(au <= 2, (2.0 - au) ** 3 / 6.0, 0.0))
    B2 = np.where(au < 1, -2.0 + 3.0 * au, np.where(au <= 2, 2.0 - au, 0.0))
    w = np.ones(u.size)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= dx / 3.0
    return w * B / s, w * B2 / s**3


def check_distributional(
    f: GridFunction,
    g: RHS,
    *,
    atol: float = ATOL,
    spacings: Sequence[int] = BUMP_SPACINGS,
    window: tuple[float, float] | None = None,
) -> WeakIneqReport:
    """Test int f phi'' <= int g(f) phi against unit-mass cubic B-spline bumps.

    Bumps have knot spacings of 2, 4 and 8 cells and are centred at every node
    where their support fits; integrals use composite Simpson on the grid with
    panels aligned to the knots. Non-uniform grids are resampled uniformly.
    """
    f = _as_grid(f)
    notes = ["test functions: cubic B-spline bumps, 3 widths x all admissible centres"]
    if not f.uniform:
        xs = np.linspace(f.a, f.b, f.x.size)
        f = GridFunction(xs, np.asarray(f(xs)), f.exact)
        notes.append("non-uniform grid resampled uniformly through the interpolant")
    x, y = f.x, f.y
    n = x.size
    dx = (x[-1] - x[0]) / (n - 1)
    gv = np.asarray(g(y), dtype=float)
    scale = float(np.max(np.abs(y)))
    res_all, tol_all, loc_all, widths = [], [], [], []
    for m in spacings:
        if 4 * m + 1 > n:
            continue
        k0, k2 = _bspline_kernels(m, dx)
        lhs = np.correlate(y, k2, mode="valid")
        rhs = np.correlate(np.where(np.isfinite(gv), gv, np.nan), k0, mode="valid")
        centers = np.arange(2 * m, n - 2 * m)
        res = lhs - rhs
        lip = _local_lipschitz(x, gv, x[centers], np.full(centers.size, 2.0 * m * dx))
        tol = atol + LIP_FACTOR * 2.0 * m * dx * lip + 64.0 * _EPS * scale / (m * dx) ** 2
        res_all.append(res)
        tol_all.append(tol)
        loc_all.append(centers)
        widths.append(4.0 * m * dx)
    if not res_all:
        return WeakIneqReport("distributional", True, -math.inf, -1, atol, (), notes=tuple(notes) + ("grid too coarse for any test function",))
    residual = np.concatenate(res_all)
    tol = np.concatenate(tol_all)
    locs = np.concatenate(loc_all)
    if window is not None:
        keep = (x[locs] >= window[0]) & (x[locs] <= window[1])
        residual, tol, locs = residual[keep], tol[keep], locs[keep]
    if np.any(np.isnan(residual)):
        notes.append(f"{int(np.isnan(residual).sum())} test functions skipped (g(f) not finite on support)")
    return _report("distributional", residual, tol, locs, widths, "upper", notes)


def _pairs_uniform(f: GridFunction):
    """Yield (m, centre indices, second differences) over all node-aligned (x, h)."""
    y = f.y
    n = y.size
    dx = (f.x[-1] - f.x[0]) / (n - 1)
    for m in range(1, (n - 1) // 2 + 1):
        d2 = (y[2 * m :] + y[: n - 2 * m] - 2.0 * y[m : n - m]) / (m * dx) ** 2
        yield m, np.arange(m, n - m), m * dx, d2


def _pairs_general(f: GridFunction):
    x, y = f.x, f.y
    for i in range(1, x.size - 1):
        left = x[:i]
        target = 2.0 * x[i] - left
        j = np.searchsorted(x, target)
        j = np.clip(j, 0, x.size - 1)
        hit = np.abs(x[j] - target) <= 1e-12 * np.maximum(1.0, np.abs(target))
        if not np.any(hit):
            continue
        h = x[i] - left[hit]
        d2 = (y[j[hit]] + y[:i][hit] - 2.0 * y[i]) / h**2
        yield None, np.full(h.size, i), h, d2


def _all_pairs(f: GridFunction):
    return _pairs_uniform(f) if f.uniform else _pairs_general(f)


def check_concavity(f: GridFunction, *, atol: float = ATOL) -> WeakIneqReport:
    """Brute force: d_h^2 f(x) <= tol for every node x and every h with x +- h on the grid."""
    f = _as_grid(f)
    scale = float(np.max(np.abs(f.y)))
    worst = (-math.inf, -math.inf, -1, atol)
    count = 0
    per_node = np.full(f.x.size, -np.inf)
    for _, centers, h, d2 in _all_pairs(f):
        tol = atol + 8.0 * _EPS * scale / np.asarray(h) ** 2
        ex = d2 - tol
        np.maximum.at(per_node, centers, ex)
        k = int(np.argmax(ex))
        count += d2.size
        if ex[k] > worst[0]:
            worst = (float(ex[k]), float(d2[k]), int(centers[k]), float(np.broadcast_to(tol, d2.shape)[k]))
    passed = worst[0] <= 0.0
    notes = (f"{count} (x, h) pairs",)
    locs = np.arange(f.x.size)
    return WeakIneqReport("concavity", bool(passed), worst[1], worst[2], worst[3], (), "upper", per_node, np.zeros(f.x.size), locs, notes)


def check_sup_bound(f: GridFunction, g: RHS, *, atol: float = ATOL) -> WeakIneqReport:
    """Brute force d_h^2 f(x) <= max of g(f) over [x-h, x+h] for every node-aligned (x, h)."""
    f = _as_grid(f)
    gv = np.asarray(g(f.y), dtype=float)
    gv = np.where(np.isfinite(gv), gv, np.inf)
    scale = float(np.max(np.abs(f.y)))
    worst = (-math.inf, -math.inf, -1, atol)
    for m, centers, h, d2 in _all_pairs(f):
        if m is not None:
            sup = maximum_filter1d(gv, size=2 * m + 1, mode="nearest")[centers]
        else:
            i = int(centers[0])
            sup = np.array([gv[(f.x >= f.x[i] - hh - 1e-12) & (f.x <= f.x[i] + hh + 1e-12)].max() for hh in h])
        tol = atol + 8.0 * _EPS * scale / np.asarray(h) ** 2
        res = d2 - sup
        ex = res - tol
        k = int(np.argmax(ex))
        if ex[k] > worst[0]:
            worst = (float(ex[k]), float(res[k]), int(centers[k]), float(np.broadcast_to(tol, d2.shape)[k]))
    return WeakIneqReport("sup_bound", bool(worst[0] <= 0.0), worst[1], worst[2], worst[3], ())


def inf_convolution(f: GridFunction, eps: float) -> GridFunction:
    """f_eps(x) = min over grid y of f(y) + |x - y|^2 / eps (semiconcave, f_eps <= f)."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    x, y = f.x, f.y
    out = np.empty_like(y)
    chunk = max(1, 2_000_000 // x.size)
    for s in range(0, x.size, chunk):
        xs = x[s : s + chunk]
        out[s : s + chunk] = np.min(y[None, :] + (xs[:, None] - x[None, :]) ** 2 / eps, axis=1)
    return GridFunction(x, np.minimum(out, y))


_MOLLIFIER_NODES, _MOLLIFIER_WEIGHTS = np.polynomial.legendre.leggauss(200)


def mollify(f: GridFunction, eps: float) -> GridFunction:
    """Convolution with the normalized symmetric bump exp(-1/(1-(t/eps)^2)) on (-eps, eps).

    The result lives on the nodes at distance >= eps from the boundary.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if eps >= 0.5 * (f.b - f.a):
        raise WindowTooSmall(f"eps={eps} is not smaller than half the window {f.b - f.a}")
    t = eps * _MOLLIFIER_NODES
    with np.errstate(divide="ignore", over="ignore"):
        rho = np.exp(-1.0 / (1.0 - _MOLLIFIER_NODES**2))
    w = _MOLLIFIER_WEIGHTS * rho
    w = w / w.sum()
    keep = (f.x - eps >= f.a - 1e-12) & (f.x + eps <= f.b + 1e-12)
    xs = f.x[keep]
    pts = np.clip(xs[:, None] + t[None, :], f.a, f.b)
    vals = np.asarray(f(pts.ravel())).reshape(pts.shape)
    return GridFunction(xs, vals @ w)
