"""Origin-symmetric convex bodies and their basic geometric queries.

A body K is described by its gauge ||x||_K = inf {t > 0 : x in tK}, a norm
whose unit ball is K.  Four concrete families are provided:

* Polygon2D   -- convex symmetric polygon given by vertices (optionally exact
                 rationals), gauge/support evaluated from face functionals;
* Ellipsoid   -- axis-aligned ellipsoid in any dimension;
* LpBall      -- axis-scaled l^p ball, p in [1, inf];
* Radial2D    -- piecewise-linear star body from radial samples at equally
                 spaced angles (a convenience wrapper over Polygon2D).

On top of the gauge the module computes support values, chord lengths at a
prescribed depth below a support line, and a curvature-condition report that
classifies boundaries as uniformly curved versus flat-sided by the growth of
chord(eps)/sqrt(eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import CapabilityError, GeometryError, ValidationError

_GL16_NODES, _GL16_WEIGHTS = np.polynomial.legendre.leggauss(16)

# Chord solves use golden-section descent to the line's gauge minimum followed
# by bisection to the two boundary crossings; iteration counts put the
# parameter error near 1e-15 * circumradius.
_GOLDEN_ITERS = 96
_BISECT_ITERS = 64
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _as_xy(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.shape[-1] < 1:
        raise ValidationError("point array has empty last axis")
    return a


class ConvexBody:
    """Common interface; concrete bodies implement gauge/support/volume."""

    dim: int

    def gauge(self, x) -> np.ndarray:
        raise NotImplementedError

    def support(self, omega) -> np.ndarray:
        """sup_{y in K} y . omega, vectorized over leading axes of omega."""
        raise NotImplementedError

    def circumradius(self) -> float:
        raise NotImplementedError

    def inradius(self) -> float:
        raise NotImplementedError

    def volume(self) -> float:
        raise NotImplementedError

    def scaled(self, s: float) -> "ConvexBody":
        raise NotImplementedError

    def diameter(self) -> float:
        # symmetric body: farthest pair is a pair of antipodal extreme points
        return 2.0 * self.circumradius()

    def as_polygon(self) -> Optional["Polygon2D"]:
        """Exact polygon view when the boundary is genuinely polygonal."""
        return None

    def kind(self) -> str:
        return type(self).__name__

    def summary(self) -> dict:
        d = {
            "kind": self.kind(),
            "dim": self.dim,
            "volume": self.volume(),
            "circumradius": self.circumradius(),
            "inradius": self.inradius(),
        }
        if self.dim == 2:
            d["perimeter"] = perimeter(self)
        return d


class Polygon2D(ConvexBody):
    """Convex polygon symmetric about the origin, vertices CCW.

    Gauge and support are exact up to float rounding: gauge is the max of the
    face functionals x.n_i / c_i, support the max of vertex dot products.
    When ``exact_vertices`` (Fraction pairs) are supplied, chord queries can
    be answered in exact rational arithmetic.
    """

    dim = 2

    def __init__(self, vertices, exact_vertices: Optional[Sequence] = None):
        V = np.asarray(vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2 or V.shape[0] < 4:
            raise ValidationError(
                "polygon needs an (n,2) vertex array with n >= 4, got shape %s"
                % (V.shape,))
        if V.shape[0] % 2 != 0:
            raise ValidationError("symmetric polygon needs an even vertex count")
        W = np.roll(V, -1, axis=0)
        area2 = float((V[:, 0] * W[:, 1] - V[:, 1] * W[:, 0]).sum())
        if area2 < 0:
            V = V[::-1].copy()
            if exact_vertices is not None:
                exact_vertices = list(exact_vertices)[::-1]
            area2 = -area2
        if area2 <= 0:
            raise ValidationError("polygon is degenerate (zero area)")
        E = np.roll(V, -1, axis=0) - V
        cross = E[:, 0] * np.roll(E, -1, axis=0)[:, 1] - E[:, 1] * np.roll(E, -1, axis=0)[:, 0]
        scale = float(np.abs(V).max())
        if np.any(cross < -1e-9 * scale * scale):
            raise ValidationError("polygon vertices are not convex")
        # central symmetry: every vertex must have its antipode in the set
        n = V.shape[0]
        half = n // 2
        anti = np.roll(V, -half, axis=0)
        if not np.allclose(anti, -V, atol=1e-9 * max(scale, 1.0)):
            raise ValidationError("polygon is not symmetric about the origin")
        self.vertices = V
        self.exact_vertices = None
        if exact_vertices is not None:
            ev = [(Fraction(a), Fraction(b)) for a, b in exact_vertices]
            if len(ev) != n:
                raise ValidationError("exact_vertices length mismatch")
            self.exact_vertices = ev
        # outward normals and offsets; origin must be strictly inside
        nx = E[:, 1]
        ny = -E[:, 0]
        norms = np.hypot(nx, ny)
        if np.any(norms == 0):
            raise ValidationError("polygon has a repeated vertex")
        self._face_n = np.stack([nx / norms, ny / norms], axis=1)
        self._face_c = np.einsum("ij,ij->i", self._face_n, V)
        if np.any(self._face_c <= 1e-12 * max(scale, 1.0)):
            raise ValidationError("origin is not strictly inside the polygon")
        self._area = 0.5 * area2

    def gauge(self, x) -> np.ndarray:
        x = _as_xy(x)
        vals = x @ self._face_n.T / self._face_c
        return np.max(vals, axis=-1)

    def support(self, omega) -> np.ndarray:
        omega = _as_xy(omega)
        return np.max(omega @ self.vertices.T, axis=-1)

    def circumradius(self) -> float:
        return float(np.hypot(self.vertices[:, 0], self.vertices[:, 1]).max())

    def inradius(self) -> float:
        return float(self._face_c.min())

    def volume(self) -> float:
        return self._area

    def perimeter(self) -> float:
        E = np.roll(self.vertices, -1, axis=0) - self.vertices
        return float(np.hypot(E[:, 0], E[:, 1]).sum())

    def scaled(self, s: float) -> "Polygon2D":
        if s <= 0:
            raise ValidationError("scale factor must be positive")
        ev = None
        if self.exact_vertices is not None and isinstance(s, (int, Fraction)):
            fs = Fraction(s)
            ev = [(a * fs, b * fs) for a, b in self.exact_vertices]
        return Polygon2D(self.vertices * float(s), ev)

    def rotated(self, angle: float) -> "Polygon2D":
        c, s = math.cos(angle), math.sin(angle)
        R = np.array([[c, -s], [s, c]])
        return Polygon2D(self.vertices @ R.T)

    def as_polygon(self) -> "Polygon2D":
        return self


class Ellipsoid(ConvexBody):
    """Axis-aligned ellipsoid {sum (x_i/a_i)^2 <= 1}."""

    def __init__(self, semi_axes):
        a = np.asarray(semi_axes, dtype=float).ravel()
        if a.size < 1 or np.any(a <= 0) or not np.all(np.isfinite(a)):
            raise ValidationError("semi_axes must be positive finite numbers")
        self.semi_axes = a
        self.dim = a.size

    def gauge(self, x) -> np.ndarray:
        x = _as_xy(x)
        return np.sqrt(np.sum((x / self.semi_axes) ** 2, axis=-1))

    def support(self, omega) -> np.ndarray:
        omega = _as_xy(omega)
        return np.sqrt(np.sum((omega * self.semi_axes) ** 2, axis=-1))

    def circumradius(self) -> float:
        return float(self.semi_axes.max())

    def inradius(self) -> float:
        return float(self.semi_axes.min())

    def volume(self) -> float:
        d = self.dim
        return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0) * float(np.prod(self.semi_axes))

    def scaled(self, s: float) -> "Ellipsoid":
        if s <= 0:
            raise ValidationError("scale factor must be positive")
        return Ellipsoid(self.semi_axes * s)


class LpBall(ConvexBody):
    """Axis-scaled l^p ball {||x / a||_p <= 1}, p in [1, inf]."""

    def __init__(self, p: float, semi_axes=(1.0, 1.0)):
        if not (p >= 1.0):
            raise ValidationError("p must satisfy p >= 1, got %r" % (p,))
        a = np.asarray(semi_axes, dtype=float).ravel()
        if a.size < 1 or np.any(a <= 0) or not np.all(np.isfinite(a)):
            raise ValidationError("semi_axes must be positive finite numbers")
        self.p = float(p)
        self.semi_axes = a
        self.dim = a.size

    def gauge(self, x) -> np.ndarray:
        x = _as_xy(x) / self.semi_axes
        if math.isinf(self.p):
            return np.max(np.abs(x), axis=-1)
        if self.p == 1.0:
            return np.sum(np.abs(x), axis=-1)
        if self.p == 2.0:
            return np.sqrt(np.sum(x * x, axis=-1))
        return np.sum(np.abs(x) ** self.p, axis=-1) ** (1.0 / self.p)

    def support(self, omega) -> np.ndarray:
        # dual norm of the scaled direction
        w = _as_xy(omega) * self.semi_axes
        if math.isinf(self.p):
            return np.sum(np.abs(w), axis=-1)
        if self.p == 1.0:
            return np.max(np.abs(w), axis=-1)
        q = self.p / (self.p - 1.0)
        return np.sum(np.abs(w) ** q, axis=-1) ** (1.0 / q)

    def circumradius(self) -> float:
        # for p > 2 the farthest boundary point is the critical direction
        # u_i ~ a_i^(2/(p-2)), giving R = (sum a_i^(2p/(p-2)))^((p-2)/(2p));
        # for p <= 2 it is the longest semi-axis endpoint
        if self.p <= 2.0:
            return float(self.semi_axes.max())
        if math.isinf(self.p):
            return float(np.sqrt(np.sum(self.semi_axes ** 2)))
        return self._critical_radius()

    def inradius(self) -> float:
        # mirrored: for p < 2 the nearest boundary point is the same critical
        # direction (p=1 recovers the origin-to-facet distance), for p >= 2
        # it is the shortest semi-axis endpoint
        if self.p >= 2.0:
            return float(self.semi_axes.min())
        return self._critical_radius()

    def _critical_radius(self) -> float:
        e = 2.0 * self.p / (self.p - 2.0)
        return float(np.sum(self.semi_axes ** e) ** (1.0 / e))

    def volume(self) -> float:
        d = self.dim
        prod = float(np.prod(self.semi_axes))
        if math.isinf(self.p):
            return 2.0 ** d * prod
        return (2.0 * math.gamma(1.0 + 1.0 / self.p)) ** d / math.gamma(1.0 + d / self.p) * prod

    def scaled(self, s: float) -> "LpBall":
        if s <= 0:
            raise ValidationError("scale factor must be positive")
        return LpBall(self.p, self.semi_axes * s)

    def as_polygon(self) -> Optional[Polygon2D]:
        if self.dim != 2:
            return None
        a1, a2 = float(self.semi_axes[0]), float(self.semi_axes[1])
        if math.isinf(self.p):
            V = [(a1, a2), (-a1, a2), (-a1, -a2), (a1, -a2)]
        elif self.p == 1.0:
            V = [(a1, 0.0), (0.0, a2), (-a1, 0.0), (0.0, -a2)]
        else:
            return None
        ev = [(Fraction(x), Fraction(y)) for x, y in V]
        return Polygon2D(np.array(V), ev)


class Radial2D(ConvexBody):
    """Piecewise-linear symmetric star body from radii r_k at angles 2*pi*k/N.

    N must be even and the resulting vertex polygon convex; both are
    validated.  All queries delegate to the underlying Polygon2D, so gauges,
    supports and chords are those of the polygon with these vertices (the
    radial profile is interpolated linearly between sample angles in the
    chordal sense).
    """

    dim = 2

    def __init__(self, radii):
        r = np.asarray(radii, dtype=float).ravel()
        n = r.size
        if n < 4 or n % 2 != 0:
            raise ValidationError("radial profile needs an even count >= 4")
        if np.any(r <= 0) or not np.all(np.isfinite(r)):
            raise ValidationError("radii must be positive finite numbers")
        if not np.allclose(r, np.roll(r, n // 2), rtol=0, atol=1e-12 * r.max()):
            raise ValidationError("radii must repeat under the antipodal map "
                                  "(r[k] == r[k + N/2])")
        th = 2.0 * math.pi * np.arange(n) / n
        V = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
        try:
            self._poly = Polygon2D(V)
        except ValidationError as e:
            raise ValidationError("radial profile is not convex: %s" % e) from None
        self.radii = r

    def gauge(self, x) -> np.ndarray:
        return self._poly.gauge(x)

    def support(self, omega) -> np.ndarray:
        return self._poly.support(omega)

    def circumradius(self) -> float:
        return self._poly.circumradius()

    def inradius(self) -> float:
        return self._poly.inradius()

    def volume(self) -> float:
        return self._poly.volume()

    def scaled(self, s: float) -> "Radial2D":
        if s <= 0:
            raise ValidationError("scale factor must be positive")
        return Radial2D(self.radii * s)

    def as_polygon(self) -> Polygon2D:
        return self._poly


# ---------------------------------------------------------------------------
# constructors

def disk(radius: float = 1.0) -> Ellipsoid:
    return Ellipsoid((radius, radius))


def ellipse(a: float, b: float) -> Ellipsoid:
    return Ellipsoid((a, b))


def square(half: float = 1.0) -> Polygon2D:
    h = Fraction(half) if float(half) == half else None
    V = [(half, half), (-half, half), (-half, -half), (half, -half)]
    ev = [(h, h), (-h, h), (-h, -h), (h, -h)] if h is not None else None
    return Polygon2D(np.array(V, dtype=float), ev)


def diamond(half: float = 1.0) -> Polygon2D:
    h = Fraction(half) if float(half) == half else None
    V = [(half, 0.0), (0.0, half), (-half, 0.0), (0.0, -half)]
    ev = [(h, 0), (0, h), (-h, 0), (0, -h)] if h is not None else None
    return Polygon2D(np.array(V, dtype=float), ev)


def regular_polygon(n_vertices: int, circumradius: float = 1.0,
                    phase: float = 0.0) -> Polygon2D:
    if n_vertices < 4 or n_vertices % 2 != 0:
        raise ValidationError("symmetric regular polygon needs even n >= 4")
    th = 2.0 * math.pi * np.arange(n_vertices) / n_vertices + phase
    V = circumradius * np.stack([np.cos(th), np.sin(th)], axis=1)
    return Polygon2D(V)


def random_symmetric_hexagon(rng: np.random.Generator) -> Polygon2D:
    """Seeded random convex hexagon with v_{k+3} = -v_k.

    Draw three angles in (0, pi) with a minimum gap and three radii in
    [0.6, 1.4]; resample until the vertex hexagon is convex.  Deterministic
    for a fixed generator state.
    """
    for _ in range(1000):
        th = np.sort(rng.uniform(0.0, math.pi, size=3))
        if th[1] - th[0] < 0.2 or th[2] - th[1] < 0.2 or th[0] + math.pi - th[2] < 0.2:
            continue
        r = rng.uniform(0.6, 1.4, size=3)
        half = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
        V = np.concatenate([half, -half], axis=0)
        try:
            return Polygon2D(V)
        except ValidationError:
            continue
    raise ValidationError("failed to sample a convex symmetric hexagon")


# ---------------------------------------------------------------------------
# directional queries

@dataclass(frozen=True)
class Direction:
    """Unit direction in the plane, stored by angle."""

    theta: float

    @property
    def omega(self) -> np.ndarray:
        return np.array([math.cos(self.theta), math.sin(self.theta)])

    @property
    def perp(self) -> np.ndarray:
        return np.array([-math.sin(self.theta), math.cos(self.theta)])


@dataclass(frozen=True)
class ChordQuery:
    """A direction plus a depth below the support line in that direction."""

    direction: Direction
    depth: float

    def __post_init__(self):
        if not (self.depth > 0.0) or not math.isfinite(self.depth):
            raise ValidationError("chord depth must be positive and finite")


def gauge_norm(body: ConvexBody, x) -> np.ndarray:
    """||x||_K; vectorized over leading axes of x."""
    return body.gauge(x)


def support(body: ConvexBody, omega) -> np.ndarray:
    """Support value sup_{y in K} y . omega; omega need not be unit length."""
    return body.support(omega)


def perimeter(body: ConvexBody, n_panels: int = 512) -> float:
    if body.dim != 2:
        raise CapabilityError("perimeter is only computed for planar bodies")
    poly = body.as_polygon()
    if poly is not None:
        return poly.perimeter()
    _, w, _ = boundary_quadrature(body, n_panels)
    return float(w.sum())


def boundary_quadrature(body: ConvexBody, n_panels: int):
    """Arc-length quadrature (points, weights, outward unit normals).

    Composite 16-node Gauss-Legendre panels over a smooth parametrization of
    the boundary; weights include the speed factor so sum(weights) converges
    to the perimeter spectrally fast.  Supports Ellipsoid and LpBall with
    1 < p < inf in the plane; polygonal boundaries have exact formulas and
    are rejected here.
    """
    if body.dim != 2:
        raise CapabilityError("boundary quadrature is planar only")
    n_panels = max(4, int(n_panels))
    t_edges = np.linspace(0.0, 2.0 * math.pi, n_panels + 1)
    half = 0.5 * (t_edges[1] - t_edges[0])
    mids = 0.5 * (t_edges[:-1] + t_edges[1:])
    t = (mids[:, None] + half * _GL16_NODES[None, :]).ravel()
    base_w = np.broadcast_to(half * _GL16_WEIGHTS[None, :], (n_panels, 16)).ravel()
    x, dx = _boundary_param(body, t)
    speed = np.hypot(dx[:, 0], dx[:, 1])
    normals = np.stack([dx[:, 1], -dx[:, 0]], axis=1) / speed[:, None]
    return x, base_w * speed, normals


def _boundary_param(body: ConvexBody, t: np.ndarray):
    c, s = np.cos(t), np.sin(t)
    if isinstance(body, Ellipsoid):
        a, b = body.semi_axes
        x = np.stack([a * c, b * s], axis=1)
        dx = np.stack([-a * s, b * c], axis=1)
        return x, dx
    if isinstance(body, LpBall) and 1.0 < body.p < math.inf:
        p = body.p
        a1, a2 = body.semi_axes
        f = np.abs(c) ** p + np.abs(s) ** p
        rho = f ** (-1.0 / p)
        drho = -rho ** (1.0 + p) * (np.abs(s) ** (p - 1.0) * np.sign(s) * c
                                    - np.abs(c) ** (p - 1.0) * np.sign(c) * s)
        x = np.stack([a1 * rho * c, a2 * rho * s], axis=1)
        dx = np.stack([a1 * (drho * c - rho * s), a2 * (drho * s + rho * c)], axis=1)
        return x, dx
    raise CapabilityError(
        "no smooth boundary parametrization for %s" % type(body).__name__)


def _chord_lengths_vec(body: ConvexBody, omegas: np.ndarray,
                       depths: np.ndarray) -> np.ndarray:
    """Chords for many (direction, depth) pairs; NaN where the line misses K."""
    poly = body.as_polygon()
    if poly is not None:
        heights = body.support(omegas) - depths
        out = np.empty(len(omegas))
        for i in range(len(omegas)):
            out[i] = _polygon_chord_float(poly.vertices, omegas[i], heights[i])
        return out
    heights = body.support(omegas) - depths
    perp = np.stack([-omegas[:, 1], omegas[:, 0]], axis=1)
    base = heights[:, None] * omegas
    R = body.circumradius() + 1.0

    def g(tv):
        return body.gauge(base + tv[:, None] * perp)

    lo = np.full(len(omegas), -R)
    hi = np.full(len(omegas), R)
    for _ in range(_GOLDEN_ITERS):
        c = hi - _INVPHI * (hi - lo)
        d = lo + _INVPHI * (hi - lo)
        take = g(c) < g(d)
        hi = np.where(take, d, hi)
        lo = np.where(take, lo, c)
    t_star = 0.5 * (lo + hi)
    g_star = g(t_star)
    miss = g_star > 1.0
    t_right = _bisect_boundary(g, t_star, np.full_like(t_star, R))
    t_left = _bisect_boundary(g, t_star, np.full_like(t_star, -R))
    chord = t_right - t_left
    chord[miss] = np.nan
    return chord


def _bisect_boundary(g, t_in: np.ndarray, t_out: np.ndarray) -> np.ndarray:
    a, b = t_in.copy(), t_out.copy()
    for _ in range(_BISECT_ITERS):
        m = 0.5 * (a + b)
        inside = g(m) <= 1.0
        a = np.where(inside, m, a)
        b = np.where(inside, b, m)
    return 0.5 * (a + b)


def _polygon_chord_float(V: np.ndarray, omega: np.ndarray, h: float) -> float:
    fa = V @ omega - h
    fb = np.roll(fa, -1)
    t = V @ np.array([-omega[1], omega[0]])
    tb = np.roll(t, -1)
    ts = []
    on_a = fa == 0.0
    if np.any(on_a):
        ts.extend(t[on_a].tolist())
    # vertices exactly on the line are collected above (each is the A-end of
    # some edge), so transversal crossings need both ends strictly off it
    crossing = (fa != 0.0) & (fb != 0.0) & ((fa > 0) != (fb > 0))
    if np.any(crossing):
        lam = fa[crossing] / (fa[crossing] - fb[crossing])
        ts.extend((t[crossing] + lam * (tb[crossing] - t[crossing])).tolist())
    if not ts:
        return math.nan
    return max(ts) - min(ts)


def chord_length(body: ConvexBody, direction, depth: float) -> float:
    """Length of K intersected with {x . omega = S(omega) - depth}.

    ``direction`` may be a Direction, an angle in radians, or a unit vector.
    Raises GeometryError when the depth is not inside (0, width(direction)).
    """
    if body.dim != 2:
        raise CapabilityError("chord queries are planar only")
    omega = _direction_vector(direction)
    depth = float(depth)
    if not (depth > 0.0) or not math.isfinite(depth):
        raise GeometryError("chord depth must be positive and finite")
    width = float(body.support(omega) + body.support(-omega))
    if depth >= width:
        raise GeometryError(
            "chord depth %g is not below the body width %g" % (depth, width))
    val = _chord_lengths_vec(body, omega[None, :], np.array([depth]))[0]
    if math.isnan(val):
        raise GeometryError("chord line misses the body (depth %g)" % depth)
    return float(val)


def chord_length_exact(body: ConvexBody, omega, depth) -> Fraction:
    """Exact rational chord for polygonal bodies with exact vertices.

    ``omega`` is a pair of rationals (need not be unit length; depth is then
    measured in the same scale as x . omega), ``depth`` a positive rational.
    """
    poly = body.as_polygon()
    if poly is None or poly.exact_vertices is None:
        raise CapabilityError("exact chords need a polygon with exact vertices")
    w = (Fraction(omega[0]), Fraction(omega[1]))
    if w == (0, 0):
        raise ValidationError("direction must be nonzero")
    depth = Fraction(depth)
    if depth <= 0:
        raise GeometryError("chord depth must be positive")
    V = poly.exact_vertices
    sup = max(v[0] * w[0] + v[1] * w[1] for v in V)
    h = sup - depth
    ts = []
    n = len(V)
    for i in range(n):
        A, B = V[i], V[(i + 1) % n]
        fa = A[0] * w[0] + A[1] * w[1] - h
        fb = B[0] * w[0] + B[1] * w[1] - h
        ta = -A[0] * w[1] + A[1] * w[0]
        tb = -B[0] * w[1] + B[1] * w[0]
        if fa == 0 and fb == 0:
            ts.extend([ta, tb])
        elif fa == 0:
            ts.append(ta)
        elif (fa > 0) != (fb > 0):
            lam = fa / (fa - fb)
            ts.append(ta + (tb - ta) * lam)
    if not ts:
        raise GeometryError("chord line misses the body (depth %s)" % depth)
    # t is measured against omega-perp of the *unnormalized* direction; divide
    # by |omega| to convert to arc length
    span = max(ts) - min(ts)
    wnorm2 = w[0] * w[0] + w[1] * w[1]
    root = _fraction_sqrt(wnorm2)
    if root is not None:
        return span / root
    raise CapabilityError(
        "direction norm sqrt(%s) is irrational; pass a rational-norm direction"
        % wnorm2)


def _fraction_sqrt(q: Fraction) -> Optional[Fraction]:
    num, den = q.numerator, q.denominator
    rn = math.isqrt(num)
    rd = math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _direction_vector(direction) -> np.ndarray:
    if isinstance(direction, Direction):
        return direction.omega
    if isinstance(direction, (int, float)):
        return np.array([math.cos(direction), math.sin(direction)])
    v = np.asarray(direction, dtype=float).ravel()
    if v.shape != (2,):
        raise ValidationError("direction must be an angle or a 2-vector")
    n = math.hypot(v[0], v[1])
    if n == 0:
        raise ValidationError("direction must be nonzero")
    return v / n


# ---------------------------------------------------------------------------
# curvature condition

@dataclass
class CurvatureReport:
    """Outcome of the chord-growth scan l(theta, eps) <= c sqrt(eps).

    ``ratios`` holds l/sqrt(eps) per (direction, depth); ``c_sup`` is its
    maximum over the scan, attained at ``theta_argmax``.  ``flat_directions``
    lists angles whose ratio keeps growing as eps shrinks dyadically, the
    signature of a flat boundary piece (there the chord stops shrinking, so
    l/sqrt(eps) grows like eps^(-1/2)).
    """

    satisfied: bool
    c_sup: float
    theta_argmax: float
    flat_directions: list
    thetas: np.ndarray
    eps_grid: np.ndarray
    ratios: np.ndarray
    c_threshold: float
    n_skipped: int


def curvature_condition(body: ConvexBody, eps_grid=None, n_theta: int = 360,
                        c_threshold: float = 100.0, run_length: int = 5,
                        growth_factor: float = 2.0) -> CurvatureReport:
    """Scan chord lengths over directions and dyadic depths.

    The condition holds when sup l / sqrt(eps) stays below ``c_threshold``
    and no direction shows a sustained growth run: ``run_length`` consecutive
    strictly increasing ratios with total growth >= ``growth_factor`` as eps
    halves.  A genuinely flat side grows by sqrt(2) per halving, so the
    default run of 5 accumulates a factor 4 and trips the detector, while a
    uniformly curved boundary has ratios converging to a constant.
    """
    if body.dim != 2:
        raise CapabilityError("the curvature scan is planar only")
    if eps_grid is None:
        eps_grid = 2.0 ** -np.arange(4, 21)
    eps_grid = np.sort(np.asarray(eps_grid, dtype=float))[::-1]
    if np.any(eps_grid <= 0):
        raise ValidationError("eps grid must be positive")
    if n_theta < 4:
        raise ValidationError("n_theta must be at least 4")
    thetas = 2.0 * math.pi * np.arange(n_theta) / n_theta
    omegas = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    widths = body.support(omegas) + body.support(-omegas)

    T, E = n_theta, eps_grid.size
    om_all = np.repeat(omegas, E, axis=0)
    ep_all = np.tile(eps_grid, T)
    valid = ep_all < 0.9 * np.repeat(widths, E)
    chords = np.full(T * E, np.nan)
    if np.any(valid):
        chords[valid] = _chord_lengths_vec(body, om_all[valid], ep_all[valid])
    ratios = (chords / np.sqrt(ep_all)).reshape(T, E)
    n_skipped = int(np.isnan(ratios).sum())

    flat = []
    for i in range(T):
        row = ratios[i]
        ok = ~np.isnan(row)
        if _has_growth_run(row[ok], run_length, growth_factor):
            flat.append(float(thetas[i]))
    finite = ratios[~np.isnan(ratios)]
    if finite.size == 0:
        raise GeometryError("no valid (direction, depth) pair in the scan")
    c_sup = float(finite.max())
    flat_idx = np.unravel_index(np.nanargmax(ratios), ratios.shape)
    theta_argmax = float(thetas[flat_idx[0]])
    satisfied = (c_sup <= c_threshold) and not flat
    return CurvatureReport(satisfied, c_sup, theta_argmax, flat,
                           thetas, eps_grid, ratios, c_threshold, n_skipped)


def _has_growth_run(row: np.ndarray, run_length: int, growth_factor: float) -> bool:
    if row.size < run_length:
        return False
    for start in range(row.size - run_length + 1):
        seg = row[start:start + run_length]
        if np.all(np.diff(seg) > 0) and seg[-1] >= growth_factor * seg[0]:
            return True
    return False


# ---------------------------------------------------------------------------
# config-driven construction

def body_from_config(section: dict, rng: Optional[np.random.Generator] = None) -> ConvexBody:
    """Build a body from a flat string-valued mapping (a parsed INI section).

    Recognized kinds: disk, ellipse, square, diamond, polygon, lp, radial,
    hexagon, regular.  Numeric fields accept plain decimals; polygon vertices
    accept integer pairs with an optional common ``denominator`` so exact
    chord queries stay available.
    """
    from .errors import ConfigError

    kind = section.get("kind", "").strip().lower()
    if not kind:
        raise ConfigError("[body] kind: missing")

    def num(key, default=None):
        raw = section.get(key, None)
        if raw is None:
            if default is None:
                raise ConfigError("[body] %s: missing" % key)
            return default
        try:
            return float(Fraction(raw.strip()))
        except (ValueError, ZeroDivisionError):
            raise ConfigError("[body] %s: expected a number, got %r" % (key, raw)) from None

    if kind == "disk":
        return disk(num("radius", 1.0))
    if kind == "ellipse":
        axes = _parse_floats(section.get("semi_axes", ""), "[body] semi_axes")
        if len(axes) < 2:
            raise ConfigError("[body] semi_axes: need at least two values")
        return Ellipsoid(axes)
    if kind == "square":
        return square(num("half", 1.0))
    if kind == "diamond":
        return diamond(num("half", 1.0))
    if kind == "lp":
        p_raw = section.get("p", "").strip().lower()
        if p_raw in ("inf", "infinity", "oo"):
            p = math.inf
        else:
            p = num("p")
        axes = _parse_floats(section.get("semi_axes", "1, 1"), "[body] semi_axes")
        return LpBall(p, axes)
    if kind == "polygon":
        raw = section.get("vertices", "")
        if not raw.strip():
            raise ConfigError("[body] vertices: missing")
        den = int(num("denominator", 1.0))
        pairs = []
        for chunk in raw.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            parts = chunk.split(",")
            if len(parts) != 2:
                raise ConfigError("[body] vertices: expected 'x, y' pairs "
                                  "separated by ';', got %r" % chunk)
            try:
                pairs.append((Fraction(parts[0].strip()) / den,
                              Fraction(parts[1].strip()) / den))
            except (ValueError, ZeroDivisionError):
                raise ConfigError("[body] vertices: bad number in %r" % chunk) from None
        V = np.array([[float(a), float(b)] for a, b in pairs])
        return Polygon2D(V, pairs)
    if kind == "radial":
        raw = section.get("radii", "").strip()
        if raw.startswith("random:"):
            if rng is None:
                raise ConfigError("[body] radii: random profile needs a seed")
            n = int(raw.split(":", 1)[1])
            if n < 4 or n % 2:
                raise ConfigError("[body] radii: random count must be even >= 4")
            for _ in range(1000):
                half = rng.uniform(0.7, 1.3, size=n // 2)
                try:
                    return Radial2D(np.concatenate([half, half]))
                except ValidationError:
                    continue
            raise ConfigError("[body] radii: failed to sample a convex profile")
        vals = _parse_floats(raw, "[body] radii")
        return Radial2D(vals)
    if kind == "hexagon":
        if rng is None:
            raise ConfigError("[body] kind=hexagon needs a seed")
        return random_symmetric_hexagon(rng)
    if kind == "regular":
        return regular_polygon(int(num("n_vertices")), num("circumradius", 1.0),
                               num("phase", 0.0))
    raise ConfigError("[body] kind: unknown kind %r" % kind)


def _parse_floats(raw: str, where: str):
    from .errors import ConfigError

    out = []
    for chunk in raw.replace(";", ",").split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            out.append(float(Fraction(chunk)))
        except (ValueError, ZeroDivisionError):
            raise ConfigError("%s: expected numbers, got %r" % (where, chunk)) from None
    if not out:
        raise ConfigError("%s: missing" % where)
    return out
