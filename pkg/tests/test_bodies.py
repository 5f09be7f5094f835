"""Gauge axioms, chord queries, curvature scans, and config parsing."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaugedist import (
    ConfigError,
    GeometryError,
    LpBall,
    Polygon2D,
    Radial2D,
    ValidationError,
    body_from_config,
    chord_length,
    chord_length_exact,
    curvature_condition,
    diamond,
    disk,
    ellipse,
    gauge_norm,
    perimeter,
    random_symmetric_hexagon,
    regular_polygon,
    square,
)


def _bodies(rng):
    return [
        disk(),
        disk(0.5),
        ellipse(2.0, 1.0),
        square(),
        diamond(),
        regular_polygon(6),
        LpBall(3.0, (1.0, 1.0)),
        random_symmetric_hexagon(rng),
    ]


finite_xy = st.tuples(
    st.floats(-50, 50, allow_nan=False),
    st.floats(-50, 50, allow_nan=False),
).filter(lambda p: abs(p[0]) + abs(p[1]) > 1e-6)


@given(finite_xy, st.floats(1e-3, 1e3))
def test_gauge_homogeneity(p, t):
    body = ellipse(2.0, 1.0)
    x = np.array(p)
    g1 = float(body.gauge(t * x))
    g0 = float(body.gauge(x))
    assert g1 == pytest.approx(t * g0, rel=1e-10)


@given(finite_xy, finite_xy)
def test_gauge_triangle_inequality(p, q):
    body = regular_polygon(6)
    x, y = np.array(p), np.array(q)
    gx = float(body.gauge(x))
    gy = float(body.gauge(y))
    gxy = float(body.gauge(x + y))
    assert gxy <= gx + gy + 1e-10 * (gx + gy)


@given(finite_xy)
def test_gauge_symmetry(p):
    for body in (square(), diamond(), disk(), ellipse(2.0, 1.0)):
        x = np.array(p)
        assert float(body.gauge(-x)) == float(body.gauge(x))


@given(finite_xy)
def test_normalized_point_hits_boundary(p):
    body = ellipse(1.5, 0.75)
    x = np.array(p)
    g = float(body.gauge(x))
    on = float(body.gauge(x / g))
    assert 1 - 1e-8 <= on <= 1 + 1e-8


def test_gauge_norm_wrapper_vectorizes(rng):
    pts = rng.normal(size=(40, 2))
    for body in _bodies(rng):
        vals = gauge_norm(body, pts)
        assert vals.shape == (40,)
        assert np.all(vals >= 0)


@given(st.floats(0, 2 * math.pi))
def test_lp_support_is_dual_norm(theta):
    # support of the unit l^p ball is the l^{p'} norm, 1/p + 1/p' = 1
    w = np.array([math.cos(theta), math.sin(theta)])
    for p, pdual in [(1.0, np.inf), (2.0, 2.0), (np.inf, 1.0), (3.0, 1.5)]:
        body = LpBall(p, (1.0, 1.0))
        want = np.linalg.norm(w, ord=pdual)
        assert float(body.support(w)) == pytest.approx(want, rel=1e-10)


def test_closed_form_scalars():
    assert disk().volume() == pytest.approx(math.pi)
    assert square().volume() == pytest.approx(4.0)
    assert diamond().volume() == pytest.approx(2.0)
    assert ellipse(2.0, 1.0).volume() == pytest.approx(2.0 * math.pi)
    assert perimeter(square()) == pytest.approx(8.0)
    assert perimeter(disk()) == pytest.approx(2.0 * math.pi, rel=1e-6)
    assert square().circumradius() == pytest.approx(math.sqrt(2.0))
    assert square().inradius() == pytest.approx(1.0)


def test_scaled_body_covariance(rng):
    pts = rng.normal(size=(20, 2))
    for body in _bodies(rng):
        big = body.scaled(3.0)
        assert big.volume() == pytest.approx(9.0 * body.volume(), rel=1e-9)
        np.testing.assert_allclose(big.gauge(pts), body.gauge(pts) / 3.0,
                                   rtol=1e-10)


def test_chord_monotone_in_depth(rng):
    eps = np.geomspace(1e-4, 0.4, 25)
    for body in _bodies(rng):
        for theta in (0.0, 0.7, 2.1):
            w = np.array([math.cos(theta), math.sin(theta)])
            ls = np.array([chord_length(body, w, e) for e in eps])
            assert np.all(np.diff(ls) >= -1e-10)


def test_chord_depth_validation():
    w = np.array([1.0, 0.0])
    with pytest.raises(GeometryError):
        chord_length(disk(), w, 2.5)
    with pytest.raises((GeometryError, ValidationError)):
        chord_length(disk(), w, -0.1)


def test_disk_chord_closed_form():
    # depth eps below the support line: half-chord sqrt(1 - (1-eps)^2)
    for eps in (1e-4, 1e-2, 0.3, 0.9):
        want = 2.0 * math.sqrt(1.0 - (1.0 - eps) ** 2)
        got = chord_length(disk(), np.array([1.0, 0.0]), eps)
        assert got == pytest.approx(want, rel=1e-9)


def test_square_chord_flat_side():
    # the side normal to (1,0) has length 2 at every positive depth
    for eps in (1e-6, 1e-3, 0.5):
        got = chord_length(square(), np.array([1.0, 0.0]), eps)
        assert got == pytest.approx(2.0, rel=1e-9)


def test_polygon_chord_exact_rational():
    val = chord_length_exact(diamond(), (1, 0), Fraction(1, 4))
    assert val == Fraction(1, 2)
    num = chord_length(diamond(), np.array([1.0, 0.0]), 0.25)
    assert abs(num - float(val)) < 1e-12
    val2 = chord_length_exact(square(), (0, 1), Fraction(1, 8))
    assert val2 == Fraction(2, 1)


def test_curvature_condition_classifies():
    ok = curvature_condition(disk(), n_theta=90)
    assert ok.satisfied
    assert ok.c_sup <= 2.0 * math.sqrt(2.0) + 1e-6
    assert ok.flat_directions == []

    el = curvature_condition(ellipse(2.0, 1.0), n_theta=90)
    assert el.satisfied

    sq = curvature_condition(square(), n_theta=90)
    assert not sq.satisfied
    # flat sides show up along the face normals
    normals = np.array(sq.flat_directions)
    assert normals.size > 0
    assert any(abs(t) < 1e-9 or abs(t - math.pi / 2) < 1e-9 for t in normals)


def test_curvature_condition_hexagon_flat():
    # face normals of the phase-0 regular hexagon sit on the default
    # 360-direction grid, so the flat signature is guaranteed visible
    hexg = curvature_condition(regular_polygon(6))
    assert not hexg.satisfied
    assert len(hexg.flat_directions) > 0


def test_radial2d_round_profile_constructs():
    thetas = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    body = Radial2D(np.full(64, 1.5))
    w = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    np.testing.assert_allclose(body.support(w), 1.5, rtol=1e-3)


def test_radial2d_convexity_guard():
    thetas = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    r = 1.0 + 0.8 * np.abs(np.sin(3 * thetas))  # star-shaped, not convex
    with pytest.raises(ValidationError):
        Radial2D(r)
    with pytest.raises(ValidationError):
        Radial2D(np.array([1.0, 2.0, 1.0, 0.5]))  # breaks antipodal symmetry


def test_polygon_requires_symmetry():
    with pytest.raises(ValidationError):
        Polygon2D(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.5]]))


def test_body_from_config_all_kinds(rng):
    cases = [
        {"kind": "disk", "radius": "2"},
        {"kind": "ellipse", "semi_axes": "2, 1"},
        {"kind": "square", "half": "1"},
        {"kind": "diamond", "half": "0.5"},
        {"kind": "lp", "p": "3", "semi_axes": "1, 1"},
        {"kind": "lp", "p": "inf"},
        {"kind": "polygon", "vertices": "2,1; -1,2; -2,-1; 1,-2"},
        {"kind": "polygon", "vertices": "2,1; -1,2; -2,-1; 1,-2",
         "denominator": "2"},
        {"kind": "regular", "n_vertices": "8"},
        {"kind": "hexagon"},
    ]
    for sec in cases:
        body = body_from_config(sec, rng)
        assert body.dim == 2


def test_body_from_config_diagnostics(rng):
    with pytest.raises(ConfigError, match=r"\[body\] kind"):
        body_from_config({}, rng)
    with pytest.raises(ConfigError, match=r"\[body\] radius"):
        body_from_config({"kind": "disk", "radius": "wide"}, rng)
    with pytest.raises(ConfigError, match=r"\[body\] vertices"):
        body_from_config({"kind": "polygon"}, rng)
    with pytest.raises(ConfigError, match="unknown"):
        body_from_config({"kind": "pentagram"}, rng)


def test_config_rational_vertices(rng):
    body = body_from_config(
        {"kind": "polygon", "vertices": "3,1; -1,3; -3,-1; 1,-3",
         "denominator": "3"}, rng)
    v = body.exact_vertices
    assert v is not None
    assert v[0][0] == Fraction(1)
    assert v[1][1] == Fraction(1)
