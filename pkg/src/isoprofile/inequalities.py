"""Sharp isoperimetric inequalities as computable bounds and certifiers.

Curvature hypotheses cannot be read off a profile, so certifiers take the
ambient class as a caller declaration and echo it in their reports. Rigidity
flags (equality within 1e-6) are informational only: rigidity conclusions are
about the ambient structure, which is not represented here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import OutOfRange
from .model_geometry import CurvatureDimension, ball_volume, model_profile, sphere_area, unit_ball_volume
from .numerics import finite_or_none
from .profile import SampledProfile, normalize

CERT_TOL = 1e-8
RIGIDITY_TOL = 1e-6


@dataclass(frozen=True)
class AvrContext:
    """Declared asymptotic volume ratio ``theta`` of an RCD(0, N) ambient."""

    theta: float
    N: int

    def __post_init__(self) -> None:
        if not (0 < self.theta <= 1):
            raise OutOfRange(f"asymptotic volume ratio must lie in (0, 1], got {self.theta}")
        if int(self.N) != self.N or self.N < 2:
            raise OutOfRange(f"dimension must be an integer >= 2, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def constant(self) -> float:
        """N (theta omega_N)^(1/N), the coefficient of V^((N-1)/N)."""
        return self.N * (self.theta * unit_ball_volume(self.N)) ** (1.0 / self.N)


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of an inequality certification on sampled data.

    ``min_slack`` is the smallest (profile - bound); passing means
    ``min_slack >= -tolerance``.
    """

    name: str
    passed: bool
    min_slack: float
    argmin_volume: float
    rigidity_flag: bool
    declared_class: str
    tolerance: float
    details: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "pass": self.passed,
            "min_slack": finite_or_none(self.min_slack),
            "argmin_volume": finite_or_none(self.argmin_volume),
            "rigidity_flag": self.rigidity_flag,
            "declared_class": self.declared_class,
            "tolerance": self.tolerance,
        }
        out.update(self.details)
        out["notes"] = list(self.notes)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def avr_lower_bound(ctx: AvrContext, V: float) -> float:
    """N (theta omega_N)^(1/N) V^((N-1)/N)."""
    if not V > 0:
        raise OutOfRange(f"volume must be positive, got {V}")
    return ctx.constant * V ** ((ctx.N - 1) / ctx.N)


def cone_profile(ctx: AvrContext, V: float) -> float:
    """Profile of the cone with asymptotic volume ratio theta (tip balls are minimizers).

    Numerically identical to ``avr_lower_bound``: cones are the equality case.
    """
    return avr_lower_bound(ctx, V)


def cone_avr_from_cross_section(area: float, N: int) -> float:
    """Asymptotic volume ratio area / (N omega_N) of the cone over a link of measure ``area``."""
    full = N * unit_ball_volume(N)
    if not (0 < area <= full * (1 + 1e-12)):
        raise OutOfRange(f"cross-section measure {area} outside (0, {full}]")
    return min(area / full, 1.0)


def _sphere(N: int) -> CurvatureDimension:
    return CurvatureDimension(N - 1, N)


def levy_gromov_bound(N: int, t: float) -> float:
    """I_{S^N}(t |S^N|) / |S^N|, evaluated at min(t, 1-t) so the symmetry is exact."""
    if not (0 <= t <= 1):
        raise OutOfRange(f"t={t} outside [0, 1]")
    s = min(t, 1.0 - t)
    if s <= 0:
        return 0.0
    cd = _sphere(N)
    H = cd.total_volume
    return model_profile(cd, s * H) / H


def certify_levy_gromov(p: SampledProfile, tol: float = CERT_TOL) -> CertificateReport:
    """Check normalize(p)(t) >= levy_gromov_bound(N, t) at every grid point.

    The ambient is taken to be RCD(N-1, N) as declared by the caller. A
    minimum slack within 1e-6 of zero flags the rigidity regime (spherical
    suspensions), reported but not asserted.
    """
    q = normalize(p)
    bound = np.array([levy_gromov_bound(p.dimension, float(t)) for t in q.volumes])
    slack = q.values - bound
    i = int(np.argmin(slack))
    return CertificateReport(
        "levy_gromov",
        bool(slack[i] >= -tol),
        float(slack[i]),
        float(p.volumes[i]),
        bool(abs(slack[i]) <= RIGIDITY_TOL),
        f"RCD({p.dimension - 1},{p.dimension})",
        tol,
        {"max_abs_slack": float(np.max(np.abs(slack))), "samples": int(slack.size)},
        ("values are normalized by the total volume before comparison",),
    )


def certify_avr(p: SampledProfile, ctx: AvrContext, tol: float = CERT_TOL) -> CertificateReport:
    """Check I(V) >= N (theta omega_N)^(1/N) V^((N-1)/N) on the grid.

    If equality holds at some grid volume (within 1e-6), the concavity
    argument forces equality everywhere; that propagation is verified and
    reported as ``equality_everywhere``.
    """
    if p.dimension != ctx.N:
        raise OutOfRange(f"profile dimension {p.dimension} differs from declared N={ctx.N}")
    bound = ctx.constant * p.volumes ** ((ctx.N - 1) / ctx.N)
    slack = p.values - bound
    rel = slack / bound
    i = int(np.argmin(slack))
    at_equality = np.abs(slack) <= RIGIDITY_TOL * np.maximum(1.0, bound)
    touched = bool(np.any(at_equality))
    everywhere = bool(np.all(at_equality))
    notes = []
    if touched and not everywhere:
        notes.append("equality at some volume but not at all volumes: data inconsistent with the declared class")
    return CertificateReport(
        "avr",
        bool(slack[i] >= -tol),
        float(slack[i]),
        float(p.volumes[i]),
        touched,
        f"RCD(0,{ctx.N}), AVR={ctx.theta!r}",
        tol,
        {
            "equality_everywhere": everywhere,
            "min_relative_slack": float(rel.min()),
            "max_relative_slack": float(rel.max()),
            "max_abs_slack": float(np.max(np.abs(slack))),
        },
        tuple(notes),
    )


@dataclass(frozen=True)
class MonotonicityReport:
    """Ratio of sampled quantities to the model's; ``failing_pair`` is the worst
    (r, R) with r < R and ratio(R) > ratio(r) + tol."""

    quantity: str
    passed: bool
    max_increase: float
    failing_pair: tuple[float, float] | None
    ratio_min: float
    ratio_max: float
    declared_class: str
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "pass": self.passed,
            "max_increase": self.max_increase,
            "failing_pair": list(self.failing_pair) if self.failing_pair else None,
            "ratio_min": self.ratio_min,
            "ratio_max": self.ratio_max,
            "declared_class": self.declared_class,
            "notes": list(self.notes),
        }


def bishop_gromov_check(
    radii: Sequence[float],
    values: Sequence[float],
    cd: CurvatureDimension,
    quantity: str = "volume",
    tol: float = CERT_TOL,
) -> MonotonicityReport:
    """Check that volume(r)/v_{K,N}(r) (or perimeter(r)/sigma_{K,N}(r)) is nonincreasing.

    Volumes are compared across consecutive samples. Perimeter monotonicity
    only holds for almost every radius, so every pair r < R is compared and
    the worst failing pair is reported, letting the caller resample noise.
    """
    r = np.asarray(radii, dtype=float)
    y = np.asarray(values, dtype=float)
    if r.shape != y.shape or r.size < 2:
        raise OutOfRange("need at least two (radius, value) samples")
    if np.any(np.diff(r) <= 0) or r[0] <= 0 or r[-1] > cd.r_max + 1e-9:
        raise OutOfRange(f"radii must increase within (0, {cd.r_max}]")
    notes: list[str] = []
    if quantity == "volume":
        model = np.array([ball_volume(cd, float(t)) for t in r])
    elif quantity == "perimeter":
        model = np.array([sphere_area(cd, float(t)) for t in r])
    else:
        raise ValueError("quantity must be 'volume' or 'perimeter'")
    keep = model > 0
    if not np.all(keep):
        notes.append(f"{int((~keep).sum())} samples at a vanishing model quantity skipped")
    r, ratio = r[keep], y[keep] / model[keep]
    if quantity == "volume":
        inc = np.diff(ratio) - tol * np.maximum(1.0, ratio[:-1])
        k = int(np.argmax(inc))
        worst, pair = float(inc[k]), (float(r[k]), float(r[k + 1]))
    else:
        i, j = np.triu_indices(ratio.size, 1)
        inc = ratio[j] - ratio[i] - tol * np.maximum(1.0, ratio[i])
        k = int(np.argmax(inc))
        worst, pair = float(inc[k]), (float(r[i[k]]), float(r[j[k]]))
    passed = worst <= 0
    return MonotonicityReport(
        quantity,
        passed,
        worst,
        None if passed else pair,
        float(ratio.min()),
        float(ratio.max()),
        f"RCD({cd.K!r},{cd.N})",
        tuple(notes),
    )


def bonnet_myers_check(diameter: float, N: int, tol: float = CERT_TOL) -> CertificateReport:
    """diam <= pi for a declared RCD(N-1, N) ambient; diam = pi flags the suspension regime."""
    slack = math.pi - diameter
    return CertificateReport(
        "bonnet_myers",
        bool(slack >= -tol),
        float(slack),
        math.nan,
        bool(abs(slack) <= RIGIDITY_TOL),
        f"RCD({N - 1},{N})",
        tol,
        {"diameter": float(diameter)},
    )


def avr_gap_existence_threshold(theta: float, eps: float, N: int) -> float:
    """Relative gap ((theta+eps)/(theta+eps/2))^(1/N) - 1 between the two power
    laws a profile would have to satisfy simultaneously; positive for eps > 0,
    so the two-sided estimate is contradictory."""
    if not (theta > 0 and eps > 0 and theta + eps <= 1 + 1e-15):
        raise OutOfRange(f"need theta > 0, eps > 0, theta + eps <= 1 (got {theta}, {eps})")
    return ((theta + eps) / (theta + 0.5 * eps)) ** (1.0 / N) - 1.0


def avr_gap_contradiction(theta: float, eps: float, N: int, V: float, value: float) -> bool:
    """Whether N((theta+eps) w_N)^(1/N) V^a <= value <= N((theta+eps/2) w_N)^(1/N) V^a is impossible."""
    avr_gap_existence_threshold(theta, eps, N)
    lower = avr_lower_bound(AvrContext(min(theta + eps, 1.0), N), V)
    upper = avr_lower_bound(AvrContext(theta + 0.5 * eps, N), V)
    return not (lower <= value <= upper)
