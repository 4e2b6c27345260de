import json
import math

import numpy as np
import pytest

from isoprofile.comparison import (
    bayle_domination_check,
    bayle_family,
    bayle_family_slope,
    bayle_phi,
    compare,
    solve_model_psi,
    sup_family_distance,
)
from isoprofile.errors import DomainError, OutOfRange, PreconditionUnverified
from isoprofile.grid import GridFunction
from isoprofile.model_geometry import CurvatureDimension
from isoprofile.profile import SampledProfile, normalize, psi_transform
from isoprofile.warped import WarpedProduct, symmetric_profile
from isoprofile.weak_d2 import check_concavity, check_pointwise, constant
from oracles import psi_s2, quad_profile

PI = math.pi
V = np.linspace(0, 4 * PI, 513)
G = constant(-2.0)


def certified(f1, f2, g=G, window=(0.0, 4 * PI), **kw):
    return compare(
        f1,
        f2,
        g,
        window,
        f1_certificate=check_pointwise(f1, g, lower=True),
        f2_certificate=check_pointwise(f2, g),
        **kw,
    )


def test_reflexivity():
    f = GridFunction(V, psi_s2(V))
    v = certified(f, f)
    assert v.ordering == "f2_ge_f1" and v.item == "both_ends"
    assert len(v.touch_points) == V.size - 2
    assert v.derivatives_matched
    m = v.derivative_matches[10]
    assert m.f1_left == m.f2_left and m.f1_right == m.f2_right


def test_sine_perturbation():
    f1 = GridFunction(V, psi_s2(V))
    f2 = GridFunction(V, psi_s2(V) + 0.1 * np.sin(V / 4))
    v = certified(f1, f2)
    assert v.ordering == "f2_ge_f1"
    assert v.touch_points == () and v.derivative_matches == ()
    assert v.min_gap >= -1e-12


def test_left_end_propagation():
    W = np.linspace(0, 3.6 * PI, 513)
    f1 = GridFunction(W, psi_s2(W))
    f2 = GridFunction(W, 3.6 * PI * W - W * W)
    v = certified(f1, f2, window=(0.0, 3.6 * PI))
    assert v.ordering == "f1_gt_f2_after" and v.item == "left_end"
    assert v.anchor == pytest.approx(W[1])


def test_right_end_propagation():
    W = np.linspace(0.4 * PI, 4 * PI, 513)
    f1 = GridFunction(W, psi_s2(W))
    f2 = GridFunction(W, (W - 0.4 * PI) * (4 * PI - W))
    v = certified(f1, f2, window=(0.4 * PI, 4 * PI))
    assert v.ordering == "f1_gt_f2_after" and v.item == "right_end"
    assert v.anchor == pytest.approx(W[-2])


def test_scaled_violator_fails_certification():
    f1 = GridFunction(V, psi_s2(V))
    f2 = GridFunction(V, 0.9 * psi_s2(V))
    with pytest.raises(PreconditionUnverified):
        certified(f1, f2)


def test_missing_or_misdirected_certificates():
    f = GridFunction(V, psi_s2(V))
    with pytest.raises(PreconditionUnverified):
        compare(f, f, G, (0, 4 * PI), f1_certificate=None, f2_certificate=check_pointwise(f, G))
    with pytest.raises(PreconditionUnverified):
        compare(f, f, G, (0, 4 * PI), f1_certificate=check_pointwise(f, G), f2_certificate=check_pointwise(f, G))


def test_rejects_decreasing_g():
    f = GridFunction(V, psi_s2(V))
    g = lambda y: -2.0 - 1e-3 * np.asarray(y)  # noqa: E731
    with pytest.raises(PreconditionUnverified):
        compare(f, f, g, (0, 4 * PI), f1_certificate=check_pointwise(f, G, lower=True), f2_certificate=check_pointwise(f, G))


def test_no_endpoint_equality_is_inconclusive():
    f1 = GridFunction(V, psi_s2(V) + 1.0)
    f2 = GridFunction(V, psi_s2(V) + 2.0)
    v = certified(f1, f2)
    assert v.ordering == "inconclusive" and v.item == "none"


def test_verdict_json():
    f = GridFunction(V, psi_s2(V))
    d = json.loads(certified(f, f).to_json())
    assert d["ordering"] == "f2_ge_f1"
    assert all(len(m["f1"]) == 2 and len(m["f2"]) == 2 for m in d["derivative_matches"])


# --- model ODE ------------------------------------------------------------------

def test_solve_model_psi_s2():
    f = solve_model_psi(CurvatureDimension(1, 2))
    assert f.b == pytest.approx(4 * PI)
    assert np.max(np.abs(f.y - psi_s2(f.x))) <= 1e-8


def test_solve_model_psi_s3():
    cd = CurvatureDimension(2, 3)
    f = solve_model_psi(cd, 2 * PI**2)
    idx = np.arange(16, f.x.size - 16, 64)
    ref = np.array([quad_profile(2.0, 3, float(f.x[i])) ** 1.5 for i in idx])
    assert np.max(np.abs(f.y[idx] - ref)) <= 1e-6


@pytest.mark.parametrize("K,N", [(1, 2), (2, 3), (3, 4), (0.5, 2)])
def test_solve_model_psi_symmetric_and_concave(K, N):
    f = solve_model_psi(CurvatureDimension(K, N), steps=1024)
    assert np.max(np.abs(f.y - f.y[::-1])) <= 1e-8
    assert check_concavity(f).passed


def test_solve_model_psi_flat_and_errors():
    f = solve_model_psi(CurvatureDimension(0, 3), 5.0, slope=1.7)
    assert np.allclose(f.y, 1.7 * f.x, rtol=0, atol=1e-15)
    with pytest.raises(DomainError):
        solve_model_psi(CurvatureDimension(0, 3), 5.0)
    with pytest.raises(DomainError):
        solve_model_psi(CurvatureDimension(-1, 2), 5.0)


def test_spindle_levy_gromov_equality_case():
    f1 = solve_model_psi(CurvatureDimension(1, 2), steps=1024)
    w = WarpedProduct.suspension(0.7, 2)
    H = w.total_volume
    t = f1.x[1:-1] / (4 * PI)
    norm = normalize(symmetric_profile(w, t * H))
    back = SampledProfile(4 * PI * norm.volumes, 4 * PI * norm.values, 2, 4 * PI)
    f2 = psi_transform(back).grid_function(with_endpoints=True)
    v = compare(
        f1,
        f2,
        G,
        (0.0, 4 * PI),
        f1_certificate=check_pointwise(f1, G, lower=True),
        f2_certificate=check_pointwise(f2, G),
    )
    assert v.ordering == "f2_ge_f1" and v.item == "both_ends"
    assert v.derivatives_matched


# --- Bayle family ---------------------------------------------------------------

def test_bayle_examples():
    for t in (0.1, 0.25, 0.5):
        assert bayle_phi(2, 2 * PI, t) == pytest.approx(math.sqrt(4 * PI * t * (4 * PI - 4 * PI * t)) / (4 * PI), rel=1e-13)
    assert bayle_phi(2, PI, 0.5) == pytest.approx(math.sqrt(3) / 2, rel=1e-13)
    assert bayle_family(2, PI, 0.5) == pytest.approx(0.75, rel=1e-13)
    for N in (2, 3, 5):
        assert bayle_phi(N, 1.0, 0.0) == 0.0
    with pytest.raises(OutOfRange):
        bayle_phi(2, 7.0, 0.3)
    with pytest.raises(OutOfRange):
        bayle_phi(2, 1.0, 0.6)


def test_bayle_slope_against_differences():
    for v, t in [(PI, 0.2), (1.5 * PI, 0.4), (2.0, 0.5)]:
        h = 1e-6
        fd = (bayle_family(2, v, t) - bayle_family(2, v, t - h)) / h
        assert bayle_family_slope(2, v, t) == pytest.approx(fd, rel=1e-4)


@pytest.mark.parametrize("N", [2, 3])
def test_bayle_monotone_in_v(N):
    half = 0.5 * CurvatureDimension(N - 1, N).total_volume
    vs = np.linspace(half / 32, half, 32)
    ts = np.linspace(1 / 64, 0.5, 32)
    table = np.array([[bayle_family(N, v, t) for t in ts] for v in vs])
    # phi_v(t) = t I(2vt)/(2vt) and I(x)/x decreases for concave I with I(0)=0
    assert np.all(np.diff(table, axis=0) <= 1e-15)


def test_bayle_domination():
    ts = np.linspace(0, 0.5, 201)
    for v in (PI, 1.5 * PI, 2 * PI - 1e-3):
        r = bayle_domination_check(2, v, ts)
        assert r.passed and r.min_value_gap > 0 and r.min_slope_gap > 0
    assert sup_family_distance(2, 2 * PI * (1 - 1e-6), ts[1:]) <= 1e-4
    r = bayle_domination_check(2, PI, ts)
    d = [m[1] for m in r.limit_monitor]
    assert d[0] > d[1] > d[2]
    assert any("not certified" in n for n in r.notes)


def test_bayle_boundary_member_fails():
    r = bayle_domination_check(2, 2 * PI, np.linspace(0.01, 0.5, 50))
    assert not r.passed and r.min_value_gap == 0.0
