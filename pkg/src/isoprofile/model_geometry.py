"""Geometry of the simply connected constant-curvature model spaces.

The model of dimension N with Ricci lower bound K has sectional curvature
k = K/(N-1). Geodesic balls are its isoperimetric regions, so its profile is
``sphere_area`` composed with the inverse of ``ball_volume``.

Conventions
-----------
- ``cos_k``/``sin_k`` solve u'' + k u = 0 with (u, u')(0) = (1, 0) and (0, 1).
- ``s_k_lambda(k, lam, r) = cos_k(r) - lam * sin_k(r)``.
- Mean curvatures are taken with respect to the inner normal, so a Euclidean
  ball of radius r has mean curvature (N-1)/r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize

from .errors import DomainExceeded, OutOfRange, Singular
from .numerics import adaptive_simpson, bracket_increasing, gauss_legendre

# |k| below this collapses to the flat branch.
K_ZERO_EPS = 1e-12
# Radii beyond r_max by at most this much are float noise and get clamped.
R_MAX_SLACK = 1e-9
FOCAL_EPS = 1e-12
QUAD_TOL = 1e-12


def _flat(k: float) -> bool:
    return abs(k) < K_ZERO_EPS


def cos_k(k: float, r: float) -> float:
    if _flat(k):
        return 1.0
    if k > 0:
        return math.cos(math.sqrt(k) * r)
    return math.cosh(math.sqrt(-k) * r)


def sin_k(k: float, r: float) -> float:
    if _flat(k):
        return float(r)
    if k > 0:
        w = math.sqrt(k)
        return math.sin(w * r) / w
    w = math.sqrt(-k)
    return math.sinh(w * r) / w


def s_k_lambda(k: float, lam: float, r: float) -> float:
    return cos_k(k, r) - lam * sin_k(k, r)


def s_k_lambda_prime(k: float, lam: float, r: float) -> float:
    """Derivative in r of ``s_k_lambda``, using cos_k' = -k sin_k and sin_k' = cos_k."""
    kk = 0.0 if _flat(k) else k
    return -kk * sin_k(k, r) - lam * cos_k(k, r)


def first_zero(k: float, lam: float) -> float:
    """Smallest r > 0 with s_{k,lam}(r) = 0, or ``inf`` if s stays positive."""
    if _flat(k):
        return 1.0 / lam if lam > 0 else math.inf
    if k > 0:
        w = math.sqrt(k)
        # s = R cos(w r + phi) with tan(phi) = lam / w
        return (0.5 * math.pi - math.atan2(lam, w)) / w
    w = math.sqrt(-k)
    if lam <= w:
        return math.inf
    return math.atanh(w / lam) / w


@lru_cache(maxsize=None)
def unit_ball_volume(N: int) -> float:
    """omega_N = pi^(N/2) / Gamma(N/2 + 1), through log-Gamma."""
    return math.exp(0.5 * N * math.log(math.pi) - math.lgamma(0.5 * N + 1.0))


@dataclass(frozen=True)
class CurvatureDimension:
    """Ricci lower bound ``K`` and dimension ``N`` of a model space."""

    K: float
    N: int

    def __post_init__(self) -> None:
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.N!r}")
        if not math.isfinite(self.K):
            raise ValueError("K must be finite")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "K", float(self.K))

    @property
    def k(self) -> float:
        """Sectional curvature of the model, K/(N-1)."""
        return self.K / (self.N - 1)

    @property
    def r_max(self) -> float:
        if self.K > 0 and not _flat(self.k):
            return math.pi * math.sqrt(self.N - 1) / math.sqrt(self.K)
        return math.inf

    @property
    def total_volume(self) -> float:
        if math.isinf(self.r_max):
            return math.inf
        return ball_volume(self, self.r_max)


@dataclass(frozen=True)
class ModelBallGeometry:
    radius: float
    area: float
    volume: float
    mean_curvature: float


def _check_radius(cd: CurvatureDimension, r: float) -> float:
    if r < 0:
        raise DomainExceeded(f"negative radius {r}")
    if r > cd.r_max:
        if r > cd.r_max + R_MAX_SLACK:
            raise DomainExceeded(f"radius {r} exceeds r_max = {cd.r_max}")
        return cd.r_max
    return float(r)


def sphere_area(cd: CurvatureDimension, r: float) -> float:
    """Measure of the distance sphere of radius r, N omega_N sin_k(r)^(N-1)."""
    r = _check_radius(cd, r)
    s = sin_k(cd.k, r)
    if s < 0.0:  # only reachable at the clamped cap through rounding
        s = 0.0
    return cd.N * unit_ball_volume(cd.N) * s ** (cd.N - 1)


def _sin_power_integral(k: float, r: float, n: int) -> float:
    """Closed form of the integral of sin_k^n over [0, r] via the reduction formula.

    Short arguments use a Gauss rule instead, avoiding the cancellation the
    recurrence suffers when sqrt(|k|) r is small.
    """
    if _flat(k):
        return r ** (n + 1) / (n + 1)
    w = math.sqrt(abs(k))
    u = w * r
    if u < 0.5:
        return gauss_legendre(lambda t: _sin_k_array(k, t) ** n, 0.0, r)
    # trig:  J_m = -s^(m-1) c / m + (m-1)/m J_{m-2}
    # hyper: J_m =  s^(m-1) c / m - (m-1)/m J_{m-2}
    if k > 0:
        s, c, sign = math.sin(u), math.cos(u), -1.0
        j = u if n % 2 == 0 else 2.0 * math.sin(0.5 * u) ** 2
    else:
        s, c, sign = math.sinh(u), math.cosh(u), 1.0
        j = u if n % 2 == 0 else 2.0 * math.sinh(0.5 * u) ** 2
    for m in range(2 + n % 2, n + 1, 2):
        j = sign * s ** (m - 1) * c / m - sign * (m - 1) / m * j
    return j / w ** (n + 1)


def _sin_k_array(k: float, t: np.ndarray) -> np.ndarray:
    if _flat(k):
        return t
    if k > 0:
        w = math.sqrt(k)
        return np.sin(w * t) / w
    w = math.sqrt(-k)
    return np.sinh(w * t) / w


def ball_volume(cd: CurvatureDimension, r: float, method: str = "closed") -> float:
    """Volume of the geodesic ball of radius r.

    ``method="closed"`` integrates sin_k^(N-1) exactly; ``"quadrature"`` runs
    adaptive Simpson on ``sphere_area`` (absolute tolerance 1e-12, depth 40).
    """
    r = _check_radius(cd, r)
    if method == "quadrature":
        return adaptive_simpson(lambda t: sphere_area(cd, t), 0.0, r, tol=QUAD_TOL, max_depth=40)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    n = cd.N - 1
    k = cd.k
    if n == 1 and not _flat(k):
        # N = 2: 2 pi (1 - cos_k r) / k, written without cancellation
        w = math.sqrt(abs(k))
        half = math.sin(0.5 * w * r) if k > 0 else math.sinh(0.5 * w * r)
        return 2.0 * math.pi * 2.0 * half * half / (w * w)
    return cd.N * unit_ball_volume(cd.N) * _sin_power_integral(k, r, n)


def invert_ball_volume(cd: CurvatureDimension, V: float) -> float:
    """Radius of the model ball of volume V."""
    total = cd.total_volume
    if not (V > 0 and V < total):
        raise OutOfRange(f"volume {V} outside (0, {total})")
    N, k = cd.N, cd.k
    if _flat(k):
        return (V / unit_ball_volume(N)) ** (1.0 / N)
    if N == 2:
        w = math.sqrt(abs(k))
        x = math.sqrt(abs(k) * V / (4.0 * math.pi))
        return 2.0 * (math.asin(min(x, 1.0)) if k > 0 else math.asinh(x)) / w
    if cd.K > 0:
        lo, hi = 0.0, cd.r_max
    else:
        lo, hi = bracket_increasing(lambda r: ball_volume(cd, r), V)
    return optimize.brentq(lambda r: ball_volume(cd, r) - V, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)


def model_profile(cd: CurvatureDimension, V: float) -> float:
    """Isoperimetric profile of the model: area of the ball enclosing volume V."""
    if _flat(cd.k):
        if not V > 0:
            raise OutOfRange(f"volume {V} must be positive")
        # N omega_N^(1/N) V^((N-1)/N), written as N V / r with r the radius
        N = cd.N
        return N * V / (V / unit_ball_volume(N)) ** (1.0 / N)
    return sphere_area(cd, invert_ball_volume(cd, V))


def model_profile_slope(cd: CurvatureDimension, V: float) -> float:
    """Derivative of ``model_profile`` at V: the mean curvature of the enclosing ball."""
    r = invert_ball_volume(cd, V)
    return (cd.N - 1) * cos_k(cd.k, r) / sin_k(cd.k, r)


def model_profile_array(cd: CurvatureDimension, volumes) -> np.ndarray:
    return np.array([model_profile(cd, float(v)) for v in np.asarray(volumes, dtype=float)])


def ball(cd: CurvatureDimension, r: float) -> ModelBallGeometry:
    r = _check_radius(cd, r)
    s = sin_k(cd.k, r)
    H = (cd.N - 1) * cos_k(cd.k, r) / s if s > 0 else math.inf
    return ModelBallGeometry(r, sphere_area(cd, r), ball_volume(cd, r), H)


def distance_sphere_mean_curvature(cd: CurvatureDimension, lam: float, r: float) -> float:
    """Mean curvature of the level set at signed distance r from a ball of boundary mean curvature (N-1) lam."""
    s = s_k_lambda(cd.k, -lam, r)
    if abs(s) < FOCAL_EPS:
        raise Singular(f"focal point: s_(k,-lam)({r}) = {s}")
    return (cd.N - 1) * s_k_lambda_prime(cd.k, -lam, r) / s
