"""Heintze-Karcher-type bounds for tubes around a set with a mean curvature barrier.

A set E with barrier c has signed distance whose Laplacian is controlled by
the distance-sphere mean curvature of the model. Integrating that control
along normal geodesics bounds the perimeter of the tube E_t by

    P(E) * (s_{k, -sign(t) c/(N-1)}(|t|))_+^(N-1),

and integrating once more bounds the volume change. For K = 0 the s-function
is 1 + c t/(N-1); for K != 0 the same integration is carried out with the
curved s-function (tagged ``integrated-laplacian-bound`` in outputs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .errors import DomainError, NonpositiveBarrier, Singular
from .io import write_table
from .model_geometry import (
    FOCAL_EPS,
    CurvatureDimension,
    cos_k,
    first_zero,
    s_k_lambda,
    s_k_lambda_prime,
    sin_k,
)
from .numerics import composite_simpson

SIMPSON_PANELS = 1024
TUBE_COLUMNS = ("t", "perimeter_bound", "volume_lower", "volume_upper")


def barrier_rhs(cd: CurvatureDimension, c: float, f: float, side: str) -> float:
    """Upper bound on the Laplacian of the signed distance f at distance |f| from E.

    Inside (f <= 0): -(N-1) s'_{k, c/(N-1)}(-f) / s_{k, c/(N-1)}(-f).
    Outside (f >= 0): (N-1) s'_{k, -c/(N-1)}(f) / s_{k, -c/(N-1)}(f).
    Both reduce to c / (1 + c f/(N-1)) when K = 0.
    """
    N1 = cd.N - 1
    if side == "inside":
        lam, r, sign = c / N1, -f, -1.0
    elif side == "outside":
        lam, r, sign = -c / N1, f, 1.0
    else:
        raise ValueError("side must be 'inside' or 'outside'")
    s = s_k_lambda(cd.k, lam, r)
    if abs(s) < FOCAL_EPS:
        raise Singular(f"s-function vanishes at distance {r} (focal point)")
    return sign * N1 * s_k_lambda_prime(cd.k, lam, r) / s


def _s_array(k: float, lam: float, r: np.ndarray) -> np.ndarray:
    if abs(k) < 1e-12:
        return 1.0 - lam * r
    w = math.sqrt(abs(k))
    if k > 0:
        return np.cos(w * r) - lam * np.sin(w * r) / w
    return np.cosh(w * r) - lam * np.sinh(w * r) / w


def _focal_length(cd: CurvatureDimension, c: float, t: float) -> float:
    lam = -math.copysign(1.0, t) * c / (cd.N - 1)
    return first_zero(cd.k, lam)


def tube_perimeter_bound(cd: CurvatureDimension, c: float, P0: float, t: float) -> float:
    """P0 * (s_{k, -sign(t) c/(N-1)}(|t|))_+^(N-1), zero past the first focal point."""
    if not P0 > 0:
        raise DomainError("base perimeter P0 must be positive")
    if t == 0:
        return float(P0)
    if abs(t) >= _focal_length(cd, c, t):
        return 0.0
    lam = -math.copysign(1.0, t) * c / (cd.N - 1)
    s = max(s_k_lambda(cd.k, lam, abs(t)), 0.0)
    return P0 * s ** (cd.N - 1)


def _tube_gain(cd: CurvatureDimension, c: float, P0: float, t: float, panels: int) -> float:
    T = min(abs(t), _focal_length(cd, c, t))
    if T == 0:
        return 0.0
    lam = -math.copysign(1.0, t) * c / (cd.N - 1)
    n1 = cd.N - 1
    return P0 * composite_simpson(lambda s: np.maximum(_s_array(cd.k, lam, s), 0.0) ** n1, 0.0, T, panels)


def tube_volume_bound(
    cd: CurvatureDimension, c: float, P0: float, V0: float, t: float, panels: int = SIMPSON_PANELS
) -> tuple[float, float]:
    """Envelope (V0 - G, V0 + G) for the volume of E_t, G the integral of the
    perimeter bound over [0, |t|] (composite Simpson)."""
    if not P0 > 0:
        raise DomainError("base perimeter P0 must be positive")
    if V0 < 0:
        raise DomainError("base volume V0 must be nonnegative")
    gain = _tube_gain(cd, c, P0, t, panels)
    return float(V0 - gain), float(V0 + gain)


def inradius_bound(cd: CurvatureDimension, c: float) -> float:
    """(N-1)/c: how deep inside E a point can be when K = 0 and c > 0."""
    if cd.K != 0:
        raise DomainError("the inradius bound is stated for K = 0")
    if not c > 0:
        raise NonpositiveBarrier(f"barrier c={c} must be positive")
    return (cd.N - 1) / c


def model_ball_barrier(cd: CurvatureDimension, r0: float) -> float:
    """Mean curvature (N-1) cos_k(r0)/sin_k(r0) of the model sphere of radius r0."""
    s = sin_k(cd.k, r0)
    if not s > 0:
        raise Singular(f"sin_k vanishes at r0={r0}")
    return (cd.N - 1) * cos_k(cd.k, r0) / s


def avr_rigidity_volume(N: int, P: float, V: float) -> tuple[float, float]:
    """Equality-case arithmetic for the sharp AVR inequality.

    With c = (N-1)/N * P/V, integrating the perimeter bound inward up to the
    inradius (N-1)/c must exhaust the volume: P (N-1)/(c N) = V. Returns
    (c, quadrature value of the exhausted volume).
    """
    cd = CurvatureDimension(0.0, N)
    c = (N - 1) / N * P / V
    depth = inradius_bound(cd, c)
    return c, _tube_gain(cd, c, P, -depth, SIMPSON_PANELS)


@dataclass(frozen=True)
class TubeRow:
    t: float
    perimeter_bound: float
    volume_lower: float
    volume_upper: float


@dataclass(frozen=True)
class TubeBound:
    """Barrier data (c, P0, V0) of a set in the model with parameters ``cd``."""

    cd: CurvatureDimension
    c: float
    P0: float
    V0: float = 0.0

    def __post_init__(self) -> None:
        if not self.P0 > 0:
            raise DomainError("base perimeter P0 must be positive")
        if self.V0 < 0:
            raise DomainError("base volume V0 must be nonnegative")

    @property
    def provenance(self) -> str:
        return "closed-form" if self.cd.K == 0 else "integrated-laplacian-bound"

    def perimeter(self, t: float) -> float:
        return tube_perimeter_bound(self.cd, self.c, self.P0, t)

    def volume(self, t: float) -> tuple[float, float]:
        return tube_volume_bound(self.cd, self.c, self.P0, self.V0, t)

    def row(self, t: float) -> TubeRow:
        lo, hi = self.volume(t)
        return TubeRow(float(t), self.perimeter(t), lo, hi)

    def table(self, ts: Iterable[float]) -> list[TubeRow]:
        return [self.row(t) for t in sorted(float(t) for t in ts)]


def write_tube_csv(out: TextIO, rows: Iterable[TubeRow]) -> None:
    write_table(out, TUBE_COLUMNS, ((r.t, r.perimeter_bound, r.volume_lower, r.volume_upper) for r in rows))
