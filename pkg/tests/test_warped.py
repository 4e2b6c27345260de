import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isoprofile.errors import DomainError, OutOfRange, UnsupportedKind
from isoprofile.inequalities import AvrContext, avr_lower_bound
from isoprofile.model_geometry import CurvatureDimension, model_profile
from isoprofile.profile import normalize, psi_transform, volume_grid
from isoprofile.warped import (
    WarpedProduct,
    cap_perimeter,
    cap_volume,
    invert_cap_volume,
    profile_values,
    symmetric_profile,
)
from isoprofile.weak_d2 import check_pointwise, profile_rhs
from oracles import omega, quad_profile, s2_profile

PI = math.pi


def test_construction():
    with pytest.raises(DomainError):
        WarpedProduct.cone(1.5, 2)
    with pytest.raises(DomainError):
        WarpedProduct.suspension(0.0, 3)
    with pytest.raises(ValueError):
        WarpedProduct.cone(0.5, 1)
    w = WarpedProduct.suspension(0.7, 3)
    assert w.length == PI and w.two_ended and w.curvature_bound == 2.0
    assert not WarpedProduct.cone(0.5, 2).two_ended
    assert WarpedProduct.model(-1, 3).curvature_bound == -2.0


def test_cap_volume_examples():
    assert cap_volume(WarpedProduct.cone(0.5, 2), math.sqrt(2)) == pytest.approx(PI, rel=1e-13)
    assert cap_volume(WarpedProduct.suspension(1.0, 2), PI) == pytest.approx(4 * PI, rel=1e-13)
    assert cap_volume(WarpedProduct.model(0, 3), 1.0) == pytest.approx(4 * PI / 3, rel=1e-13)
    assert cap_volume(WarpedProduct.cone(1.0, 3), 1.0) == pytest.approx(4 * PI / 3, rel=1e-13)
    with pytest.raises(OutOfRange):
        cap_volume(WarpedProduct.suspension(1.0, 2), 4.0)
    with pytest.raises(OutOfRange):
        cap_volume(WarpedProduct.cone(0.5, 2), -1.0)


def test_cap_perimeter_examples():
    assert cap_perimeter(WarpedProduct.cone(0.5, 2), math.sqrt(2)) == pytest.approx(PI * math.sqrt(2), rel=1e-15)
    assert cap_perimeter(WarpedProduct.suspension(1.0, 2), PI / 2) == pytest.approx(2 * PI, rel=1e-15)
    assert cap_perimeter(WarpedProduct.suspension(0.7, 2), PI / 2) == pytest.approx(1.4 * PI, rel=1e-15)


@pytest.mark.parametrize(
    "w",
    [
        WarpedProduct.cone(0.3, 3),
        WarpedProduct.suspension(0.7, 2),
        WarpedProduct.suspension(0.9, 4),
        WarpedProduct.model(-1, 3),
        WarpedProduct.model(1, 2),
    ],
    ids=repr,
)
def test_volume_derivative_is_perimeter(w):
    h = 1e-5
    for t in (0.3, 1.0, 2.0):
        fd = (cap_volume(w, t + h) - cap_volume(w, t - h)) / (2 * h)
        assert fd == pytest.approx(cap_perimeter(w, t), rel=1e-6, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["cone", "suspension", "model+", "model-"]), st.integers(2, 4), st.floats(0.02, 0.98))
def test_invert_cap_volume_round_trip(kind, N, frac):
    w = {
        "cone": WarpedProduct.cone(0.6, N),
        "suspension": WarpedProduct.suspension(0.8, N),
        "model+": WarpedProduct.model(1.0, N),
        "model-": WarpedProduct.model(-1.0, N),
    }[kind]
    V = frac * w.total_volume if math.isfinite(w.total_volume) else 10 * frac
    t = invert_cap_volume(w, V)
    assert cap_volume(w, t) == pytest.approx(V, rel=1e-12)


def test_symmetric_profile_examples():
    V = volume_grid(math.inf, 64, v_max=30.0)
    p = symmetric_profile(WarpedProduct.cone(0.5, 2), V)
    ref = np.array([avr_lower_bound(AvrContext(0.5, 2), v) for v in V])
    assert np.max(np.abs(p.values - ref) / ref) <= 1e-10
    assert p.certified_minimal
    V = volume_grid(4 * PI, 64)
    p = symmetric_profile(WarpedProduct.suspension(1.0, 2), V)
    assert np.max(np.abs(p.values - s2_profile(V))) <= 1e-10
    w = WarpedProduct.suspension(0.7, 2)
    q = normalize(symmetric_profile(w, volume_grid(w.total_volume, 64)))
    assert np.max(np.abs(q.values - s2_profile(4 * PI * q.volumes) / (4 * PI))) <= 1e-8


@pytest.mark.parametrize("k", [-1.0, 0.0, 1.0])
@pytest.mark.parametrize("N", [2, 3])
def test_models_match_model_profile(k, N):
    w = WarpedProduct.model(k, N)
    cd = CurvatureDimension(k * (N - 1), N)
    V = volume_grid(w.total_volume, 33) if k > 0 else volume_grid(math.inf, 33, v_max=20.0)
    p = symmetric_profile(w, V)
    ref = np.array([model_profile(cd, v) for v in V])
    assert np.max(np.abs(p.values - ref) / ref) <= 1e-8
    ind = np.array([quad_profile(k * (N - 1), N, v) for v in V[::8]])
    assert np.max(np.abs(p.values[::8] - ind) / ind) <= 1e-8


@pytest.mark.parametrize(
    "w",
    [WarpedProduct.suspension(0.7, 2), WarpedProduct.suspension(0.5, 3), WarpedProduct.model(1.0, 3)],
    ids=repr,
)
def test_complement_symmetry(w):
    V = volume_grid(w.total_volume, 41)
    vals = profile_values(w, V)
    assert np.max(np.abs(vals - vals[::-1])) <= 1e-10


@pytest.mark.parametrize(
    "w",
    [
        WarpedProduct.cone(0.4, 2),
        WarpedProduct.cone(0.8, 3),
        WarpedProduct.suspension(0.7, 2),
        WarpedProduct.suspension(0.7, 3),
        WarpedProduct.model(1.0, 2),
        WarpedProduct.model(-1.0, 2),
    ],
    ids=repr,
)
def test_psi_satisfies_profile_inequality(w):
    N = w.N
    total = w.total_volume
    V = volume_grid(total, 257) if math.isfinite(total) else volume_grid(math.inf, 257, v_max=20.0)
    psi = psi_transform(symmetric_profile(w, V)).grid_function()
    g = profile_rhs(w.curvature_bound, N)
    r = check_pointwise(psi, g)
    assert r.passed
    assert abs(r.worst_residual) <= 1e-4  # all of these are equality cases


def test_custom_warps_are_candidates_only():
    w = WarpedProduct.custom(math.sin, 2, PI)
    with pytest.raises(UnsupportedKind):
        symmetric_profile(w, [1.0, 2.0, 3.0])
    p = symmetric_profile(w, [1.0, 2.0, 3.0], allow_candidate=True)
    assert not p.certified_minimal
    assert np.allclose(p.values, s2_profile(np.array([1.0, 2.0, 3.0])), rtol=1e-12)
    bump = WarpedProduct.custom(lambda r: r * (1 + 0.3 * math.sin(r)), 3)
    assert bump.curvature_bound is None and not bump.two_ended
    assert cap_perimeter(bump, 1.0) == pytest.approx(4 * PI * (1 + 0.3 * math.sin(1.0)) ** 2)


def test_total_volumes():
    for N in (2, 3, 5):
        s = WarpedProduct.suspension(1.0, N)
        assert s.total_volume == pytest.approx((N + 1) * omega(N + 1), rel=1e-12)
    assert math.isinf(WarpedProduct.cone(0.5, 2).total_volume)
