"""Exact symmetric regions in warped products dr^2 + (a f(r))^2 g_{S^{N-1}}.

Cones (f = r), spherical suspensions (f = sin r) and the constant-curvature
models (f = sin_k r) have caps {r < t} among their isoperimetric regions, so
minimizing over caps from either end gives their profile. Everything here is
computed by direct quadrature and root finding, independently of
``model_geometry``, so it can serve as an oracle for the rest of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import DomainError, OutOfRange, UnsupportedKind
from .profile import SampledProfile

KINDS = ("cone", "suspension", "model", "custom")
QUAD_EPSABS = 1e-14
QUAD_EPSREL = 1e-13
_EPS = float(np.finfo(float).eps)


def _link_measure(N: int) -> float:
    """Measure of the unit round sphere S^(N-1): N pi^(N/2) / Gamma(N/2 + 1)."""
    return N * math.pi ** (N / 2) / math.gamma(N / 2 + 1)


@dataclass(frozen=True)
class WarpedProduct:
    """Warp a * f(r) on [0, length] over a round link of dimension N-1.

    Use the constructors ``cone``, ``suspension``, ``model`` and ``custom``.
    """

    kind: str
    N: int
    a: float = 1.0
    k: float = 0.0
    warp: Callable[[float], float] | None = field(default=None, repr=False, compare=False)
    custom_length: float = math.inf

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.N!r}")
        if self.kind in ("cone", "suspension") and not (0 < self.a <= 1):
            raise DomainError(f"link scale a={self.a} must lie in (0, 1]")
        if self.kind == "custom" and self.warp is None:
            raise ValueError("custom warped products need a warp function")

    @classmethod
    def cone(cls, a: float, N: int) -> "WarpedProduct":
        return cls("cone", N, a)

    @classmethod
    def suspension(cls, a: float, N: int) -> "WarpedProduct":
        return cls("suspension", N, a)

    @classmethod
    def model(cls, k: float, N: int) -> "WarpedProduct":
        return cls("model", N, 1.0, float(k))

    @classmethod
    def custom(cls, warp: Callable[[float], float], N: int, length: float = math.inf) -> "WarpedProduct":
        return cls("custom", N, 1.0, 0.0, warp, float(length))

    @property
    def length(self) -> float:
        if self.kind == "suspension":
            return math.pi
        if self.kind == "model" and self.k > 0:
            return math.pi / math.sqrt(self.k)
        if self.kind == "custom":
            return self.custom_length
        return math.inf

    @property
    def two_ended(self) -> bool:
        L = self.length
        if not math.isfinite(L):
            return False
        if self.kind == "custom":
            return abs(self.warp(L)) < 1e-12
        return True

    @property
    def curvature_bound(self) -> float | None:
        """Ricci lower bound K certified for the kind (None for custom warps)."""
        if self.kind == "cone":
            return 0.0
        if self.kind == "suspension":
            return float(self.N - 1)
        if self.kind == "model":
            return (self.N - 1) * self.k
        return None

    def unit_warp(self, r: float) -> float:
        if self.kind == "cone":
            return r
        if self.kind == "suspension":
            return math.sin(r)
        if self.kind == "model":
            if self.k == 0:
                return r
            w = math.sqrt(abs(self.k))
            return math.sin(w * r) / w if self.k > 0 else math.sinh(w * r) / w
        return float(self.warp(r))

    @property
    def total_volume(self) -> float:
        L = self.length
        return cap_volume(self, L) if math.isfinite(L) else math.inf


def _check_t(w: WarpedProduct, t: float) -> float:
    L = w.length
    if t < 0 or t > L * (1 + 1e-12):
        raise OutOfRange(f"t={t} outside [0, {L}]")
    return min(t, L)


def cap_volume(w: WarpedProduct, t: float) -> float:
    """Volume of {r < t}: N omega_N a^(N-1) times the integral of f^(N-1) over [0, t]."""
    t = _check_t(w, t)
    n = w.N - 1
    val, _ = integrate.quad(lambda s: max(w.unit_warp(s), 0.0) ** n, 0.0, t, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=200)
    return _link_measure(w.N) * w.a**n * val


def cap_perimeter(w: WarpedProduct, t: float) -> float:
    """Measure of the level set {r = t}: N omega_N (a f(t))^(N-1)."""
    t = _check_t(w, t)
    return _link_measure(w.N) * (w.a * max(w.unit_warp(t), 0.0)) ** (w.N - 1)


def invert_cap_volume(w: WarpedProduct, V: float) -> float:
    """t with cap_volume(t) = V, by Newton steps (derivative = cap_perimeter)
    safeguarded by bisection; relative tolerance 4 eps in t."""
    total = w.total_volume
    if not (0 < V < total):
        raise OutOfRange(f"volume {V} outside (0, {total})")
    lo = 0.0
    if math.isfinite(w.length):
        hi = w.length
    else:
        hi = 1.0
        while cap_volume(w, hi) < V:
            lo, hi = hi, 2.0 * hi
    x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = cap_volume(w, x) - V
        if fx == 0:
            return x
        if fx > 0:
            hi = x
        else:
            lo = x
        d = cap_perimeter(w, x)
        step = fx / d if d > 0 else math.inf
        nxt = x - step
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= 4 * _EPS * abs(nxt) or hi - lo <= 4 * _EPS * hi:
            return nxt
        x = nxt
    return x


def profile_values(w: WarpedProduct, volumes: Sequence[float]) -> np.ndarray:
    """Least cap perimeter at each volume (no certification marker, any number of volumes)."""
    total = w.total_volume
    vals = []
    for V in np.asarray(volumes, dtype=float):
        best = cap_perimeter(w, invert_cap_volume(w, float(V)))
        if w.two_ended:
            # region {r > t} of volume V: complement of the left cap of volume total - V
            best = min(best, cap_perimeter(w, invert_cap_volume(w, total - float(V))))
        vals.append(best)
    return np.array(vals)


def symmetric_profile(
    w: WarpedProduct,
    volumes: Sequence[float],
    *,
    allow_candidate: bool = False,
    label: str | None = None,
) -> SampledProfile:
    """Least perimeter among caps from either end (and their complements).

    Raises
    ------
    UnsupportedKind
        For custom warps, unless ``allow_candidate``; the result is then an
        upper bound for the profile marked ``certified_minimal=False``.
    """
    if w.kind == "custom" and not allow_candidate:
        raise UnsupportedKind("symmetric caps are not certified minimal for custom warps; pass allow_candidate=True for an upper bound")
    total = w.total_volume
    vals = profile_values(w, volumes)
    name = label if label is not None else f"{w.kind}({w.k if w.kind == 'model' else w.a:g})"
    return SampledProfile(volumes, vals, w.N, total, name, certified_minimal=w.kind != "custom")
