"""ODE comparison for weak second-order inequalities, the equality-case model ODE,
and the auxiliary family used in the rigidity part of the Levy-Gromov argument.

The comparison engine does not re-derive the lemma; given certified
differential inequalities it checks the ordering claims on the grid.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, NoConvergence, OutOfRange, PreconditionUnverified
from .grid import GridFunction, one_sided_slope
from .model_geometry import CurvatureDimension, model_profile, model_profile_slope
from .numerics import finite_or_none
from .weak_d2 import RHS, WeakIneqReport

TOUCH_TOL = 1e-8
SLOPE_TOL = 1e-5
MODEL_STEPS = 4096
BOUNDARY_LAYER = 256
SHOOT_MISS_MAX = 1e-6


@dataclass(frozen=True)
class DerivativeMatch:
    """One-sided slopes of both functions at an interior touch point."""

    point: float
    f1_left: float
    f1_right: float
    f2_left: float
    f2_right: float
    matched: bool

    def to_dict(self) -> dict:
        return {
            "point": self.point,
            "f1": [self.f1_left, self.f1_right],
            "f2": [self.f2_left, self.f2_right],
            "matched": self.matched,
        }


@dataclass(frozen=True)
class ComparisonVerdict:
    """Ordering established on the window.

    ``item`` names the lemma conclusion that was checked: ``both_ends``
    (equality at both endpoints), ``left_end`` / ``right_end`` (strict
    propagation from a single equal endpoint), or ``none``.
    ``anchor`` is the first (last) point with f1 > f2 for ``left_end``
    (``right_end``).
    """

    ordering: str
    item: str
    touch_points: tuple[float, ...]
    derivative_matches: tuple[DerivativeMatch, ...]
    min_gap: float
    anchor: float | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def derivatives_matched(self) -> bool:
        return all(m.matched for m in self.derivative_matches)

    def to_dict(self) -> dict:
        return {
            "ordering": self.ordering,
            "item": self.item,
            "touch_points": list(self.touch_points),
            "derivative_matches": [m.to_dict() for m in self.derivative_matches],
            "min_gap": finite_or_none(self.min_gap),
            "anchor": self.anchor,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _require(cert: WeakIneqReport | None, name: str, direction: str) -> None:
    if cert is None:
        raise PreconditionUnverified(f"no differential-inequality certificate for {name}")
    if not cert.passed:
        raise PreconditionUnverified(
            f"certificate for {name} failed ({cert.sense}: residual {cert.worst_residual:.3e} > tol {cert.tolerance:.3e})"
        )
    if cert.direction != direction:
        want = "upper_D2 >= g" if direction == "lower" else "upper_D2 <= g"
        raise PreconditionUnverified(f"certificate for {name} has the wrong direction (need {want})")


def compare(
    f1: GridFunction,
    f2: GridFunction,
    g: RHS,
    window: tuple[float, float],
    *,
    f1_certificate: WeakIneqReport | None,
    f2_certificate: WeakIneqReport | None,
    touch_tol: float = TOUCH_TOL,
    slope_tol: float = SLOPE_TOL,
) -> ComparisonVerdict:
    """Check the comparison lemma's conclusions for f1, f2 on ``window``.

    Hypotheses: f1, f2 continuous, nonnegative, positive inside; g
    nondecreasing; upper_D2 f1 >= g(f1) (``f1_certificate``, from
    ``check_pointwise(..., lower=True)``) and lower_D2 f2 <= g(f2)
    (``f2_certificate``, any passing upper-direction certificate).

    Raises
    ------
    PreconditionUnverified
        A certificate is missing, failed, or points the wrong way, or the
        sampled data contradicts the other hypotheses.
    """
    _require(f1_certificate, "f1", "lower")
    _require(f2_certificate, "f2", "upper")
    a, b = window
    g1 = f1.restrict(a, b)
    x = g1.x
    if abs(x[0] - a) > 1e-12 * max(1.0, abs(a)) or abs(x[-1] - b) > 1e-12 * max(1.0, abs(b)):
        raise PreconditionUnverified("f1 must be sampled at both window endpoints")
    y1 = g1.y
    g2 = f2.restrict(a, b)
    y2 = g2.y if g2.x.shape == x.shape and np.allclose(g2.x, x, rtol=1e-12, atol=0) else np.asarray(f2(x))
    if np.any(y1 < -touch_tol) or np.any(y2 < -touch_tol):
        raise PreconditionUnverified("f1 and f2 must be nonnegative on the window")
    if np.any(y1[1:-1] <= 0) or np.any(y2[1:-1] <= 0):
        raise PreconditionUnverified("f1 and f2 must be positive inside the window")
    vals = np.sort(np.concatenate([y1[1:-1], y2[1:-1]]))
    gv = np.asarray(g(vals), dtype=float)
    if np.any(np.diff(gv) < -1e-12 * np.maximum(1.0, np.abs(gv[1:]))):
        raise PreconditionUnverified("g must be nondecreasing on the sampled values")

    d = y2 - y1
    eq_a = abs(d[0]) <= touch_tol
    eq_b = abs(d[-1]) <= touch_tol
    notes: list[str] = []
    min_gap = float(d.min())

    if eq_a and eq_b:
        interior = np.nonzero(np.abs(d[1:-1]) <= touch_tol)[0] + 1
        f2g = GridFunction(x, y2)
        matches = []
        for i in interior:
            s = [one_sided_slope(f, float(x[i]), side).value for f in (g1, f2g) for side in ("left", "right")]
            ok = abs(s[0] - s[2]) <= slope_tol and abs(s[1] - s[3]) <= slope_tol
            matches.append(DerivativeMatch(float(x[i]), s[0], s[1], s[2], s[3], ok))
        ordered = min_gap >= -touch_tol
        matched = all(m.matched for m in matches)
        if not ordered:
            notes.append("f2 < f1 somewhere despite equal endpoints: certificates inconsistent with data")
        if not matched:
            notes.append(f"one-sided derivatives differ by more than {slope_tol} at a touch point")
        return ComparisonVerdict(
            "f2_ge_f1" if ordered and matched else "inconclusive",
            "both_ends",
            tuple(float(x[i]) for i in interior),
            tuple(matches),
            min_gap,
            notes=tuple(notes),
        )

    if eq_a or eq_b:
        above = -d > touch_tol
        if eq_a:
            hits = np.nonzero(above)[0]
            region = slice(hits[0], None) if hits.size else None
            item = "left_end"
        else:
            hits = np.nonzero(above)[0]
            region = slice(None, hits[-1] + 1) if hits.size else None
            item = "right_end"
        if region is None:
            notes.append("f1 never exceeds f2 beyond tolerance: the strict-propagation items do not apply")
            return ComparisonVerdict("inconclusive", item, (), (), min_gap, notes=tuple(notes))
        anchor = float(x[hits[0]] if eq_a else x[hits[-1]])
        held = bool(np.all(d[region] < 0))
        if not held:
            notes.append("strict ordering f1 > f2 not propagated: certificates inconsistent with data")
        return ComparisonVerdict("f1_gt_f2_after" if held else "inconclusive", item, (), (), min_gap, anchor, tuple(notes))

    notes.append("no endpoint equality: the lemma draws no conclusion")
    return ComparisonVerdict("inconclusive", "none", (), (), min_gap, notes=tuple(notes))


def _rk4(rhs, x0: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * h * k1)
    k3 = rhs(y + 0.5 * h * k2)
    k4 = rhs(y + h * k3)
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


class _ModelOde:
    """psi'' = -c psi^p with c = K N/(N-1), p = (2-N)/N, started at its maximum P."""

    def __init__(self, K: float, N: int):
        self.c = K * N / (N - 1)
        self.p = (2.0 - N) / N
        self.N = N

    def rhs(self, y: np.ndarray) -> np.ndarray:
        psi = max(y[0], 1e-300)
        return np.array([y[1], -self.c * psi**self.p])

    def tail(self, P: float, psi_b: float) -> float:
        """Distance from level psi_b down to the zero, by the first integral
        psi'^2 = c N (P^(2/N) - psi^(2/N))."""
        if psi_b <= 0:
            return 0.0
        e = 2.0 / self.N
        cN = self.c * self.N
        val, _ = integrate.quad(lambda s: 1.0 / math.sqrt(cN * (P**e - s**e)), 0.0, psi_b, epsabs=1e-14, epsrel=1e-13, limit=200)
        return val

    def shoot(self, P: float, h: float, steps: int) -> tuple[np.ndarray, float]:
        """Integrate ``steps`` RK4 steps from the maximum; returns the values and
        the distance from the maximum at which psi vanishes."""
        y = np.array([P, 0.0])
        out = [P]
        for j in range(steps):
            nxt = _rk4(self.rhs, 0.0, y, h)
            if nxt[0] <= 0.0:
                return np.array(out), j * h + self.tail(P, y[0])
            y = nxt
            out.append(y[0])
        return np.array(out), steps * h + self.tail(P, y[0])


def solve_model_psi(
    cd: CurvatureDimension,
    L: float | None = None,
    *,
    slope: float | None = None,
    steps: int = MODEL_STEPS,
) -> GridFunction:
    """Solve psi'' = -K N/(N-1) psi^((2-N)/N), psi(0) = psi(L) = 0, on ``steps`` cells.

    Shooting from the midpoint (psi' = 0 there by symmetry) on the peak value,
    RK4 with step L/steps up to L - L/256; across the last layer the distance
    to the zero comes from the energy first integral, which is regular where
    the right-hand side is singular. K = 0 has the linear family and needs
    ``slope``.

    Raises
    ------
    NoConvergence
        The boundary zero is missed by more than 1e-6.
    """
    N = cd.N
    if cd.K < 0:
        raise DomainError("no compact equality case for K < 0")
    if cd.K == 0:
        if slope is None:
            raise DomainError("K = 0 needs the slope psi'(0)")
        if L is None or not math.isfinite(L):
            raise DomainError("K = 0 needs a finite window length L")
        x = np.linspace(0.0, L, steps + 1)
        return GridFunction(x, slope * x)
    if L is None:
        L = cd.total_volume
    if not L > 0:
        raise OutOfRange("L must be positive")
    if steps % 2 or steps < 2 * BOUNDARY_LAYER:
        raise ValueError("steps must be even and at least twice the boundary layer")
    ode = _ModelOde(cd.K, N)
    h = L / steps
    half = steps // 2
    layer = steps // BOUNDARY_LAYER
    rk_steps = half - layer

    # peak from the exact scaling of the half-length in P
    A, _ = integrate.quad(lambda u: 1.0 / math.sqrt(1.0 - u ** (2.0 / N)), 0.0, 1.0, limit=200)
    P0 = (0.5 * L * math.sqrt(ode.c * N) / A) ** (N / (N - 1))

    def miss(P):
        return ode.shoot(P, h, rk_steps)[1] - 0.5 * L

    lo, hi = 0.5 * P0, 2.0 * P0
    P = optimize.brentq(miss, lo, hi, xtol=1e-15 * P0, rtol=4 * np.finfo(float).eps, maxiter=200)
    values, zero = ode.shoot(P, h, rk_steps)
    err = abs(zero - 0.5 * L)
    if err > SHOOT_MISS_MAX or values.size != rk_steps + 1:
        raise NoConvergence(f"shooting missed the boundary zero by {err:.3e}")

    # boundary layer: invert distance-to-zero = tail(P, psi)
    right = np.empty(half + 1)
    right[: rk_steps + 1] = values
    for j in range(rk_steps + 1, half):
        dist = (half - j) * h
        right[j] = optimize.brentq(lambda s: ode.tail(P, s) - dist, 0.0, right[rk_steps], xtol=1e-15 * P, rtol=4 * np.finfo(float).eps)
    right[half] = 0.0
    y = np.concatenate([right[::-1], right[1:]])
    x = h * np.arange(steps + 1)
    x[-1] = L
    return GridFunction(x, y)


def _sphere(N: int) -> CurvatureDimension:
    return CurvatureDimension(N - 1, N)


def _check_v(N: int, v: float) -> float:
    half = 0.5 * _sphere(N).total_volume
    if not (0 < v <= half * (1 + 1e-15)):
        raise OutOfRange(f"v={v} outside (0, {half}]")
    return min(v, half)


def _check_t(t: float) -> None:
    if not (0 <= t <= 0.5):
        raise OutOfRange(f"t={t} outside [0, 1/2]")


def bayle_phi(N: int, v: float, t: float) -> float:
    """phi_v(t) = I_{S^N}(2 v t) / (2 v); at v = |S^N|/2 this is the normalized sphere profile."""
    v = _check_v(N, v)
    _check_t(t)
    if t == 0:
        return 0.0
    return model_profile(_sphere(N), 2.0 * v * t) / (2.0 * v)


def bayle_phi_slope(N: int, v: float, t: float) -> float:
    """phi_v'(t) = I_{S^N}'(2 v t) for t in (0, 1/2]."""
    v = _check_v(N, v)
    _check_t(t)
    if t == 0:
        raise OutOfRange("phi_v' is unbounded at t = 0")
    return model_profile_slope(_sphere(N), 2.0 * v * t)


def bayle_family(N: int, v: float, t: float) -> float:
    """f_v(t) = phi_v(t)^(N/(N-1))."""
    return bayle_phi(N, v, t) ** (N / (N - 1))


def bayle_family_slope(N: int, v: float, t: float) -> float:
    phi = bayle_phi(N, v, t)
    return N / (N - 1) * phi ** (1.0 / (N - 1)) * bayle_phi_slope(N, v, t)


@dataclass(frozen=True)
class BayleReport:
    """Strict domination of f_1 by f_v and the monitored approach v -> |S^N|/2."""

    N: int
    v: float
    passed: bool
    min_value_gap: float
    argmin_value_gap: float
    min_slope_gap: float
    argmin_slope_gap: float
    limit_monitor: tuple[tuple[float, float], ...]
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "v": self.v,
            "pass": self.passed,
            "min_value_gap": self.min_value_gap,
            "argmin_value_gap": self.argmin_value_gap,
            "min_slope_gap": self.min_slope_gap,
            "argmin_slope_gap": self.argmin_slope_gap,
            "limit_monitor": [list(p) for p in self.limit_monitor],
            "notes": list(self.notes),
        }


def sup_family_distance(N: int, v: float, ts: Sequence[float]) -> float:
    """max over ``ts`` of |f_v - f_1|."""
    half = 0.5 * _sphere(N).total_volume
    return max(abs(bayle_family(N, v, t) - bayle_family(N, half, t)) for t in ts)


def bayle_domination_check(N: int, v: float, ts: Sequence[float]) -> BayleReport:
    """Verify f_v > f_1 and f_v' > f_1' on the t-grid (0, 1/2], plus f_v -> f_1
    at three values of v approaching |S^N|/2."""
    ts = [float(t) for t in ts if t > 0]
    if not ts:
        raise OutOfRange("t-grid needs points in (0, 1/2]")
    half = 0.5 * _sphere(N).total_volume
    vg = np.array([bayle_family(N, v, t) - bayle_family(N, half, t) for t in ts])
    sg = np.array([bayle_family_slope(N, v, t) - bayle_family_slope(N, half, t) for t in ts])
    iv, is_ = int(np.argmin(vg)), int(np.argmin(sg))
    monitor = tuple((half * (1 - eps), sup_family_distance(N, half * (1 - eps), ts)) for eps in (1e-2, 1e-4, 1e-6))
    notes = ["v -> |S^N|/2 is monitored at finitely many v; the limit itself is not certified"]
    if v >= half:
        notes.append("v at the boundary of the family: f_v = f_1, strictness cannot hold")
    passed = bool(vg[iv] > 0 and sg[is_] > 0)
    return BayleReport(N, float(v), passed, float(vg[iv]), ts[iv], float(sg[is_]), ts[is_], monitor, tuple(notes))
