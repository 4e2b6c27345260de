"""Sampled isoperimetric profiles and quantities read off them.

A profile is stored as values on a strictly increasing volume grid, so that
profiles computed here and profiles ingested from files are handled alike.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InfiniteVolume, InvalidProfile, NotDifferentiable, OutOfRange
from .grid import GridFunction, SlopeEstimate, one_sided_slope

DIFFERENTIABILITY_TOL = 1e-6


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SampledProfile:
    """Isoperimetric profile I(V) sampled on a volume grid.

    ``certified_minimal`` is False for candidate data (upper bounds built from
    a restricted family of competitors), True when the samples are the profile.
    """

    volumes: np.ndarray
    values: np.ndarray
    dimension: int
    total_volume: float = math.inf
    label: str = ""
    certified_minimal: bool = True

    def __post_init__(self) -> None:
        v, y = _frozen(self.volumes), _frozen(self.values)
        if v.ndim != 1 or v.shape != y.shape:
            raise InvalidProfile("volumes and values must be one-dimensional with equal length")
        if v.size < 3:
            raise InvalidProfile("a profile needs at least 3 samples")
        if int(self.dimension) != self.dimension or self.dimension < 2:
            raise InvalidProfile(f"dimension must be an integer >= 2, got {self.dimension!r}")
        if np.any(np.diff(v) <= 0):
            raise InvalidProfile("volumes must be strictly increasing")
        if v[0] <= 0 or not (v[-1] < self.total_volume):
            raise InvalidProfile(f"volumes must lie in (0, {self.total_volume})")
        if not np.all(np.isfinite(y)) or np.any(y <= 0):
            raise InvalidProfile("profile values must be finite and positive inside the volume range")
        object.__setattr__(self, "volumes", v)
        object.__setattr__(self, "values", y)
        object.__setattr__(self, "dimension", int(self.dimension))
        object.__setattr__(self, "total_volume", float(self.total_volume))

    def __len__(self) -> int:
        return self.volumes.size

    @property
    def finite(self) -> bool:
        return math.isfinite(self.total_volume)

    @cached_property
    def grid_function(self) -> GridFunction:
        return GridFunction(self.volumes, self.values)

    def __call__(self, V):
        return self.grid_function(V)

    def scaled(self, factor: float, label: str | None = None) -> "SampledProfile":
        """Same grid with values multiplied by ``factor``."""
        return SampledProfile(
            self.volumes,
            factor * self.values,
            self.dimension,
            self.total_volume,
            label if label is not None else f"{factor:g}*{self.label}",
            self.certified_minimal,
        )


@dataclass(frozen=True, eq=False)
class PsiProfile:
    """The power I^(N/(N-1)) of a profile, on the same grid."""

    volumes: np.ndarray
    psi: np.ndarray
    dimension: int
    total_volume: float = math.inf

    @property
    def exponent(self) -> float:
        return self.dimension / (self.dimension - 1)

    def to_profile(self) -> SampledProfile:
        return SampledProfile(self.volumes, self.psi ** (1.0 / self.exponent), self.dimension, self.total_volume)

    def grid_function(self, with_endpoints: bool = False) -> GridFunction:
        """ψ as a grid function; ``with_endpoints`` appends ψ(0)=0 and ψ(V_tot)=0."""
        x, y = self.volumes, self.psi
        if with_endpoints:
            x = np.concatenate(([0.0], x))
            y = np.concatenate(([0.0], y))
            if math.isfinite(self.total_volume):
                x = np.concatenate((x, [self.total_volume]))
                y = np.concatenate((y, [0.0]))
        return GridFunction(x, y)


def psi_transform(p: SampledProfile) -> PsiProfile:
    N = p.dimension
    psi = p.values ** (N / (N - 1))
    psi.setflags(write=False)
    return PsiProfile(p.volumes, psi, N, p.total_volume)


def normalize(p: SampledProfile) -> SampledProfile:
    """Rescale volumes and values by the total volume, so t runs over (0, 1)."""
    if not p.finite:
        raise InfiniteVolume("normalization needs a finite total volume")
    T = p.total_volume
    return SampledProfile(p.volumes / T, p.values / T, p.dimension, 1.0, p.label, p.certified_minimal)


def volume_grid(total_volume: float, n: int, *, v_min: float | None = None, v_max: float | None = None, geometric: bool = False) -> np.ndarray:
    """Default volume grids.

    Finite total volume: ``n`` nodes uniform in the open interval and symmetric
    about its midpoint. Infinite: uniform on (0, v_max], or log-uniform on
    [v_min, v_max] when ``geometric`` (resolves the power-law regime near 0).
    """
    if n < 3:
        raise ValueError("grid needs at least 3 nodes")
    if math.isfinite(total_volume) and not geometric:
        return total_volume * np.arange(1, n + 1) / (n + 1)
    if v_max is None:
        raise ValueError("v_max is required for an infinite-volume grid")
    if geometric:
        lo = v_min if v_min is not None else v_max * 1e-4
        return np.geomspace(lo, v_max, n)
    return v_max * np.arange(1, n + 1) / n


@dataclass(frozen=True)
class SymmetryReport:
    residual: float
    worst_volume: float
    compared: int

    def to_dict(self) -> dict:
        return {"residual": self.residual, "worst_volume": self.worst_volume, "compared": self.compared}


def symmetry_check(p: SampledProfile) -> SymmetryReport:
    """Largest |I(V) - I(V_tot - V)| over grid volumes whose reflection is in range."""
    if not p.finite:
        raise InfiniteVolume("symmetry needs a finite total volume")
    refl = p.total_volume - p.volumes
    inside = (refl >= p.volumes[0]) & (refl <= p.volumes[-1])
    if not np.any(inside):
        return SymmetryReport(0.0, math.nan, 0)
    gf = p.grid_function
    mirrored = np.array([_value_at(gf, r) for r in refl[inside]])
    diff = np.abs(p.values[inside] - mirrored)
    j = int(np.argmax(diff))
    return SymmetryReport(float(diff[j]), float(p.volumes[inside][j]), int(inside.sum()))


def _value_at(gf: GridFunction, t: float) -> float:
    i = gf.node_index(t)
    return float(gf.y[i]) if i is not None else float(gf(t))


def one_sided_derivative(p: SampledProfile, V: float, side: str) -> SlopeEstimate:
    if not (p.volumes[0] < V < p.volumes[-1]):
        raise OutOfRange(f"volume {V} is not interior to the sampled range")
    return one_sided_slope(p.grid_function, V, side)


def barrier_from_profile(p: SampledProfile, V: float, tol: float = DIFFERENTIABILITY_TOL) -> float:
    """Mean curvature barrier I'(V) of isoperimetric sets of volume V.

    Only defined where the profile is differentiable; at a corner there is no
    canonical choice, so this raises instead of picking a side.
    """
    left = one_sided_derivative(p, V, "left").value
    right = one_sided_derivative(p, V, "right").value
    if abs(left - right) > tol:
        raise NotDifferentiable(f"one-sided derivatives at V={V} differ: left={left}, right={right}")
    return 0.5 * (left + right)


@dataclass(frozen=True)
class SubadditivityReport:
    passed: bool
    min_slack: float
    argmin: tuple[float, float]
    pairs: int

    def to_dict(self) -> dict:
        return {"pass": self.passed, "min_slack": self.min_slack, "argmin": list(self.argmin), "pairs": self.pairs}


def strict_subadditivity_check(p: SampledProfile, atol: float | None = None) -> SubadditivityReport:
    """Check I(V1 + V2) < I(V1) + I(V2) over all grid pairs with V1 + V2 in range.

    Meaningful for nonnegatively curved ambients (declared by the caller).
    Passes when the smallest slack exceeds ``atol`` (default 1e-12 times the
    largest sampled value), so exact additivity counts as failure.
    """
    if atol is None:
        atol = 1e-12 * float(np.max(p.values))
    v, y = p.volumes, p.values
    i, j = np.triu_indices(v.size)
    s = v[i] + v[j]
    keep = s <= v[-1]
    if not np.any(keep):
        return SubadditivityReport(False, math.nan, (math.nan, math.nan), 0)
    i, j, s = i[keep], j[keep], s[keep]
    gf = p.grid_function
    combined = np.asarray(gf.interpolant(s))
    # reuse exact node values where the sum lands on a node
    idx = np.clip(np.searchsorted(v, s), 0, v.size - 1)
    on_node = np.abs(v[idx] - s) <= 1e-12 * np.maximum(1.0, s)
    combined = np.where(on_node, y[idx], combined)
    slack = y[i] + y[j] - combined
    m = int(np.argmin(slack))
    return SubadditivityReport(bool(slack[m] > atol), float(slack[m]), (float(v[i[m]]), float(v[j[m]])), int(slack.size))
