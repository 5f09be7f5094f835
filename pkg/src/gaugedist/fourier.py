"""Fourier transforms of convex bodies and decay-rate diagnostics.

Two transforms are computed with the convention
FT f (xi) = integral f(x) exp(-2 pi i x . xi) dx:

* ``surface_ft``: the transform of the boundary arc-length measure;
* ``body_ft``: the transform of the indicator function of the body.

For polygonal boundaries both reduce to exact per-edge closed forms.  For
smooth planar boundaries (ellipses, l^p balls with 1 < p < inf) they are
evaluated by composite Gauss-Legendre arc-length quadrature with a node
count proportional to |xi|, so the oscillatory phase advances a bounded
amount per panel and the quadrature error stays near 1e-10 at every
frequency.  The indicator transform is reduced to the boundary through the
divergence identity

    body_ft(xi) = -1/(2 pi i |xi|^2) * surface-integral of (xi . n) e(-x.xi),

which avoids any area mesh.  Closed forms additionally cover boxes and
ellipsoids in dimension >= 3.

On top of the transforms the module provides spherical L^1/L^2 averages on
frequency circles, power-law fits with an optional logarithmic correction,
per-window envelope extraction for oscillatory decay data, and two bound
reports: the chord bound |body_ft(t w)| <= (C/t) * (sum of the two chords at
depth 1/(2t)) and the dilated-annulus bound with its divergence diagnosis
for flat-sided bodies.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import bodies as _bodies
from .bodies import ConvexBody, Ellipsoid, LpBall, Polygon2D
from .errors import (CapabilityError, InsufficientDataError, ValidationError)

# boundary rule: one 16-node panel per unit of |xi| * diam(K), i.e. a node
# budget of max(64, 16 |xi| diam).  The boundary sees at most |xi| * perimeter
# <= pi |xi| diam oscillations, so this keeps >= 16/pi ~ 5 nodes per
# oscillation and Gauss-Legendre stays in its spectral regime (doubling the
# panel count moves values by ~1e-12; asserted in the tests).
_PANELS_PER_UNIT = 1.0
_NODES_PER_PANEL = 16
# angular rule: half-circle nodes per unit of R * diam(K).  For a symmetric
# body the integrand has period pi, so N nodes on [0, pi) give the identical
# value to 2N uniform nodes on [0, 2 pi); 16 per unit here is the 32-per-unit
# full-circle budget, ~5x past the integrand's angular band limit.
_ANGULAR_PER_UNIT = 16.0
_MIN_ANGULAR = 128
# cap on Q*A entries per evaluation block, bounding scratch buffers
_BLOCK_ENTRIES = 24_000_000


@dataclass(frozen=True)
class Frequency:
    """A frequency vector, optionally built from polar data."""

    xi: np.ndarray

    @staticmethod
    def polar(magnitude: float, theta: float) -> "Frequency":
        if magnitude < 0:
            raise ValidationError("frequency magnitude must be nonnegative")
        return Frequency(np.array([magnitude * math.cos(theta),
                                   magnitude * math.sin(theta)]))

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.xi))

    # polar decomposition xi = R * omega
    @property
    def R(self) -> float:
        return self.magnitude

    @property
    def omega(self) -> np.ndarray:
        m = self.magnitude
        if m == 0.0:
            # direction is arbitrary at the origin; pick e1 so R*omega == xi
            e = np.zeros_like(self.xi)
            e[0] = 1.0
            return e
        return self.xi / m


@dataclass(frozen=True)
class AnnulusSpec:
    """Dilation annulus: scales in [R, R + delta], thin relative to R."""

    R: float
    delta: float

    def __post_init__(self):
        if not (self.R > 0):
            raise ValidationError("annulus R must be positive")
        if not (0 < self.delta <= self.R / 10.0):
            raise ValidationError(
                "annulus delta must satisfy 0 < delta <= R/10, got R=%g delta=%g"
                % (self.R, self.delta))


def _xi_rows(xi):
    if isinstance(xi, Frequency):
        xi = xi.xi
    a = np.asarray(xi, dtype=float)
    single = a.ndim == 1
    rows = np.atleast_2d(a)
    if rows.ndim != 2:
        raise ValidationError("xi must be a vector or a matrix of row vectors")
    return rows, single


def surface_ft(body: ConvexBody, xi):
    """Transform of the boundary arc-length measure at xi (rows or vector)."""
    rows, single = _xi_rows(xi)
    out = _transform(body, rows, kind="surface")
    return out[0] if single else out


def body_ft(body: ConvexBody, xi):
    """Transform of the indicator of the body; body_ft(0) is the volume."""
    rows, single = _xi_rows(xi)
    out = _transform(body, rows, kind="body")
    return out[0] if single else out


def annulus_ft(body: ConvexBody, xi, spec: AnnulusSpec):
    """Transform of the indicator of (R+delta)K minus RK at xi.

    Equals F(R+delta) - F(R) with F(s) = s^d body_ft(s xi); the two dilated
    evaluations are where all the cancellation happens, so no thin-shell
    mesh is ever built.
    """
    rows, single = _xi_rows(xi)
    d = body.dim
    s1, s2 = spec.R, spec.R + spec.delta
    out = (s2 ** d) * _transform(body, s2 * rows, kind="body") \
        - (s1 ** d) * _transform(body, s1 * rows, kind="body")
    return out[0] if single else out


# ---------------------------------------------------------------------------
# transform dispatch

def _transform(body: ConvexBody, rows: np.ndarray, kind: str) -> np.ndarray:
    if kind not in ("surface", "body"):
        raise ValidationError("kind must be 'surface' or 'body'")
    if rows.shape[1] != body.dim:
        raise ValidationError("xi dimension %d does not match body dimension %d"
                              % (rows.shape[1], body.dim))
    if body.dim == 2:
        poly = body.as_polygon()
        if poly is not None:
            return _polygon_ft(poly, rows, kind)
        if isinstance(body, Ellipsoid):
            # closed Bessel form covers the body transform always and the
            # surface transform of round disks; arc length does not push
            # forward under the linear map, so stretched surface measure
            # still needs the quadrature engine
            if kind == "body" or np.ptp(body.semi_axes) == 0.0:
                return _ellipsoid_ft_closed(body, rows, kind)
            return _smooth_ft(body, rows, kind)
        if isinstance(body, LpBall) and 1.0 < body.p < math.inf:
            return _smooth_ft(body, rows, kind)
        raise CapabilityError("no planar transform for %s" % type(body).__name__)
    # higher dimensions: closed-form families only
    if isinstance(body, LpBall) and body.p == 2.0:
        body = Ellipsoid(body.semi_axes)
    if isinstance(body, Ellipsoid):
        return _ellipsoid_ft_closed(body, rows, kind)
    if isinstance(body, LpBall) and math.isinf(body.p):
        return _box_ft_closed(body, rows, kind)
    raise CapabilityError(
        "transforms in dimension %d cover boxes and ellipsoids only, got %s"
        % (body.dim, type(body).__name__))


def _polygon_ft(poly: Polygon2D, rows: np.ndarray, kind: str) -> np.ndarray:
    """Exact per-edge formula: an edge from A to B of length L contributes
    L * sinc((B-A).xi) * e(-(A+B)/2 . xi) to the arc-length transform."""
    V = poly.vertices
    D = np.roll(V, -1, axis=0) - V
    L = np.hypot(D[:, 0], D[:, 1])
    M = V + 0.5 * D
    N = poly._face_n
    out = np.empty(rows.shape[0], dtype=complex)
    block = max(256, int(4e6 / max(len(V), 1)))
    for lo in range(0, rows.shape[0], block):
        xi = rows[lo:lo + block]
        u = D @ xi.T
        ph = M @ xi.T
        edge = (L[:, None] * np.sinc(u)) * np.exp(-2j * math.pi * ph)
        if kind == "surface":
            out[lo:lo + block] = edge.sum(axis=0)
        else:
            flux = ((N @ xi.T) * edge).sum(axis=0)
            r2 = np.einsum("ij,ij->i", xi, xi)
            vals = np.empty(xi.shape[0], dtype=complex)
            zero = r2 < 1e-24
            vals[~zero] = 1j * flux[~zero] / (2.0 * math.pi * r2[~zero])
            vals[zero] = poly.volume()
            out[lo:lo + block] = vals
    return out


def _smooth_ft(body: ConvexBody, rows: np.ndarray, kind: str) -> np.ndarray:
    diam = body.diameter()
    mags = np.hypot(rows[:, 0], rows[:, 1])
    need = np.maximum(4, np.ceil(_PANELS_PER_UNIT * mags * diam)).astype(int)
    buckets = 1 << np.ceil(np.log2(need)).astype(int)
    out = np.empty(rows.shape[0], dtype=complex)
    for p in np.unique(buckets):
        idx = np.nonzero(buckets == p)[0]
        x, w, n = _bodies.boundary_quadrature(body, int(p))
        out[idx] = _quad_eval(x, w, n, rows[idx], mags[idx], kind,
                              body.volume())
    return out


def _quad_eval(x, w, n, xi, mags, kind, volume) -> np.ndarray:
    Q = x.shape[0]
    A = xi.shape[0]
    out = np.empty(A, dtype=complex)
    wn1 = w * n[:, 0]
    wn2 = w * n[:, 1]
    block = max(16, min(A, int(_BLOCK_ENTRIES / Q)))
    for lo in range(0, A, block):
        sub = xi[lo:lo + block]
        P = np.multiply.outer(x[:, 0], sub[:, 0])
        P += np.multiply.outer(x[:, 1], sub[:, 1])
        P *= -2.0 * math.pi
        C = np.cos(P)
        np.sin(P, out=P)
        if kind == "surface":
            out[lo:lo + block] = (w @ C) + 1j * (w @ P)
        else:
            f = (wn1 @ C + 1j * (wn1 @ P)) * sub[:, 0] \
                + (wn2 @ C + 1j * (wn2 @ P)) * sub[:, 1]
            r2 = mags[lo:lo + block] ** 2
            vals = np.empty(sub.shape[0], dtype=complex)
            zero = r2 < 1e-24
            vals[~zero] = 1j * f[~zero] / (2.0 * math.pi * r2[~zero])
            vals[zero] = volume
            out[lo:lo + block] = vals
    return out


def _ellipsoid_ft_closed(body: Ellipsoid, rows: np.ndarray, kind: str) -> np.ndarray:
    from scipy.special import jv

    d = body.dim
    a = body.semi_axes
    g = np.linalg.norm(rows * a, axis=1)
    if kind == "body":
        out = np.empty(rows.shape[0], dtype=complex)
        zero = g < 1e-12
        z = 2.0 * math.pi * g[~zero]
        out[~zero] = float(np.prod(a)) * jv(d / 2.0, z) / (g[~zero] ** (d / 2.0))
        out[zero] = body.volume()
        return out
    if not np.allclose(a, a[0]):
        raise CapabilityError(
            "surface transforms in dimension >= 3 need a round ball")
    r = a[0]
    mags = np.linalg.norm(rows, axis=1)
    out = np.empty(rows.shape[0], dtype=complex)
    zero = mags < 1e-12
    z = 2.0 * math.pi * r * mags[~zero]
    nu = (d - 2) / 2.0
    out[~zero] = (2.0 * math.pi * r ** (d / 2.0)
                  * jv(nu, z) / mags[~zero] ** nu)
    # surface area of the sphere of radius r
    out[zero] = 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0) * r ** (d - 1)
    return out


def _box_ft_closed(body: LpBall, rows: np.ndarray, kind: str) -> np.ndarray:
    a = body.semi_axes
    # per-axis interval transforms 2 a sinc(2 a xi)
    f = 2.0 * a * np.sinc(2.0 * rows * a)
    if kind == "body":
        return np.prod(f, axis=1).astype(complex)
    d = body.dim
    out = np.zeros(rows.shape[0])
    for j in range(d):
        face = 2.0 * np.cos(2.0 * math.pi * a[j] * rows[:, j])
        others = np.prod(np.delete(f, j, axis=1), axis=1)
        out += face * others
    return out.astype(complex)


# ---------------------------------------------------------------------------
# spherical averages

def spherical_average(body: ConvexBody, R: float, kind: str = "body",
                      p: int = 2, n_nodes: Optional[int] = None,
                      threads: int = 1) -> float:
    """L^p average of |transform| over the frequency circle of radius R.

    Rectangle rule over a half circle (the integrand has period pi for a
    symmetric body); the node count grows linearly with R * diam(K) so the
    rule stays far past the integrand's angular band limit.
    """
    if body.dim != 2:
        raise CapabilityError("spherical averages are planar only")
    if p not in (1, 2):
        raise ValidationError("p must be 1 or 2")
    if not (R >= 0):
        raise ValidationError("R must be nonnegative")
    if n_nodes is None:
        # half-circle count; equals the max(256, 32 R diam) full-circle rule
        n_nodes = max(_MIN_ANGULAR,
                      int(math.ceil(_ANGULAR_PER_UNIT * R * body.diameter())))
    th = math.pi * np.arange(n_nodes) / n_nodes
    xi = R * np.stack([np.cos(th), np.sin(th)], axis=1)
    vals = np.abs(_transform_threaded(body, xi, kind, threads))
    if p == 1:
        return float(vals.mean())
    return float(math.sqrt(np.mean(vals * vals)))


def _transform_threaded(body: ConvexBody, rows: np.ndarray, kind: str,
                        threads: int) -> np.ndarray:
    threads = max(1, int(threads))
    if threads == 1 or rows.shape[0] < 4 * threads:
        return _transform(body, rows, kind)
    # fixed contiguous chunks, reassembled by index: the result is
    # bit-identical to the serial evaluation regardless of scheduling
    chunks = np.array_split(np.arange(rows.shape[0]), threads)
    out = np.empty(rows.shape[0], dtype=complex)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        futs = [(c, ex.submit(_transform, body, rows[c], kind)) for c in chunks]
        for c, f in futs:
            out[c] = f.result()
    return out


def radial_samples(body: ConvexBody, R_values, theta: float,
                   kind: str = "surface") -> np.ndarray:
    """|transform| sampled along the ray of direction theta at radii R."""
    R = np.asarray(R_values, dtype=float).ravel()
    xi = np.stack([R * math.cos(theta), R * math.sin(theta)], axis=1)
    return np.abs(_transform(body, xi, kind))


# ---------------------------------------------------------------------------
# decay fitting

@dataclass
class DecayProfile:
    """Least-squares power law v ~ C (log R)^k R^(-gamma) in log-log space."""

    gamma: float
    amplitude: float
    residual: float
    n_used: int
    n_dropped: int
    log_power: int
    R: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def predict(self, R) -> np.ndarray:
        R = np.asarray(R, dtype=float)
        corr = np.log(R) ** self.log_power if self.log_power else 1.0
        return self.amplitude * corr * R ** (-self.gamma)


def decay_fit(R_values, values, log_power: int = 0,
              min_samples: int = 8, min_octaves: float = 3.0) -> DecayProfile:
    """Fit a decay exponent; nonpositive values are dropped, not fatal.

    With ``log_power`` = k the model is C (log R)^k R^(-gamma), the correction
    needed by flat-sided averages; the fit stays linear because k is fixed.
    Raises InsufficientDataError when fewer than ``min_samples`` positive
    samples remain or they span fewer than ``min_octaves`` octaves.
    """
    R = np.asarray(R_values, dtype=float).ravel()
    v = np.asarray(values, dtype=float).ravel()
    if R.shape != v.shape:
        raise ValidationError("R and value arrays must have matching shapes")
    keep = np.isfinite(v) & (v > 0) & np.isfinite(R) & (R > 0)
    if log_power:
        keep &= R > 1.0
    n_dropped = int((~keep).sum())
    R, v = R[keep], v[keep]
    order = np.argsort(R)
    R, v = R[order], v[order]
    if R.size < min_samples:
        raise InsufficientDataError(
            "decay fit needs >= %d positive samples, have %d"
            % (min_samples, R.size))
    if R.size and math.log2(R[-1] / R[0]) < min_octaves - 1e-9:
        raise InsufficientDataError(
            "decay fit needs samples spanning >= %g octaves, have %.3g"
            % (min_octaves, math.log2(R[-1] / R[0])))
    y = np.log(v)
    if log_power:
        y = y - log_power * np.log(np.log(R))
    X = np.stack([np.ones_like(R), -np.log(R)], axis=1)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = float(np.sqrt(np.mean((X @ coef - y) ** 2)))
    return DecayProfile(gamma=float(coef[1]), amplitude=float(math.exp(coef[0])),
                        residual=resid, n_used=int(R.size), n_dropped=n_dropped,
                        log_power=log_power, R=R, values=v)


def octave_envelope(R_values, values, windows_per_octave: int = 2):
    """Per-window maxima of an oscillatory decay curve.

    Splits the R range into geometric windows (``windows_per_octave`` per
    factor of 2) and keeps the sample of largest value in each, which tracks
    the upper envelope and is immune to zeros of the oscillation landing on
    the grid.  Returns (R_env, v_env).
    """
    R = np.asarray(R_values, dtype=float).ravel()
    v = np.asarray(values, dtype=float).ravel()
    if R.size != v.size or R.size == 0:
        raise ValidationError("need matching nonempty R and value arrays")
    if np.any(R <= 0):
        raise ValidationError("R values must be positive")
    if windows_per_octave < 1:
        raise ValidationError("windows_per_octave must be >= 1")
    lo = R.min()
    k = np.floor(windows_per_octave * np.log2(R / lo) * (1 - 1e-12)).astype(int)
    R_env, v_env = [], []
    for kk in np.unique(k):
        idx = np.nonzero(k == kk)[0]
        j = idx[np.argmax(v[idx])]
        R_env.append(R[j])
        v_env.append(v[j])
    return np.array(R_env), np.array(v_env)


def window_aggregate(R_values, values, windows_per_octave: int = 2,
                     agg: str = "rms"):
    """Geometric-window aggregation of scan samples before fitting.

    Collapses each window (``windows_per_octave`` per factor of 2) to a
    single point at the geometric-mean radius.  'rms' is the right
    reduction for oscillatory magnitudes: it tracks the local L^2 level
    instead of whichever phase the grid happened to sample.  Returns
    (R_agg, v_agg).
    """
    R = np.asarray(R_values, dtype=float).ravel()
    v = np.asarray(values, dtype=float).ravel()
    if R.size != v.size or R.size == 0:
        raise ValidationError("need matching nonempty R and value arrays")
    if np.any(R <= 0):
        raise ValidationError("R values must be positive")
    if agg not in ("rms", "mean", "max"):
        raise ValidationError("agg must be rms, mean, or max")
    lo = R.min()
    k = np.floor(windows_per_octave * np.log2(R / lo) * (1 - 1e-12)).astype(int)
    R_out, v_out = [], []
    for kk in np.unique(k):
        idx = np.nonzero(k == kk)[0]
        R_out.append(float(np.exp(np.mean(np.log(R[idx])))))
        if agg == "rms":
            v_out.append(float(np.sqrt(np.mean(v[idx] ** 2))))
        elif agg == "mean":
            v_out.append(float(np.mean(v[idx])))
        else:
            v_out.append(float(np.max(v[idx])))
    return np.array(R_out), np.array(v_out)


# ---------------------------------------------------------------------------
# bound reports

@dataclass
class ChordBoundReport:
    """Ratios |body_ft(t w)| * t / (2 l(theta, 1/(2t))) over a (t, theta) grid.

    For a symmetric body the two opposite chords at equal depth coincide, so
    the comparison chord sum is 2 l.  ``octave_max`` holds the largest ratio
    per dyadic octave of t; a bounded constant makes these flat across
    octaves, while spread beyond a small factor flags scale drift.
    """

    t_values: np.ndarray
    thetas: np.ndarray
    ratios: np.ndarray
    max_ratio: float
    octave_edges: np.ndarray
    octave_max: np.ndarray
    n_skipped: int

    @property
    def octave_spread(self) -> float:
        med = float(np.median(self.octave_max))
        return float(self.octave_max.max() / med) if med > 0 else math.inf


def chord_bound_report(body: ConvexBody, t_values, n_theta: int = 64) -> ChordBoundReport:
    if body.dim != 2:
        raise CapabilityError("the chord bound report is planar only")
    t = np.sort(np.asarray(t_values, dtype=float).ravel())
    if np.any(t <= 0):
        raise ValidationError("t values must be positive")
    thetas = 2.0 * math.pi * np.arange(n_theta) / n_theta
    omegas = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    widths = body.support(omegas) + body.support(-omegas)
    ratios = np.full((t.size, n_theta), np.nan)
    n_skipped = 0
    for i, ti in enumerate(t):
        eps = 1.0 / (2.0 * ti)
        ok = eps < 0.45 * widths  # chord depth must stay inside the body
        n_skipped += int((~ok).sum())
        if not np.any(ok):
            continue
        chords = _bodies._chord_lengths_vec(body, omegas[ok],
                                            np.full(int(ok.sum()), eps))
        vals = np.abs(_transform(body, ti * omegas[ok], "body"))
        ratios[i, ok] = vals * ti / (2.0 * chords)
    finite = ratios[np.isfinite(ratios)]
    if finite.size == 0:
        raise InsufficientDataError("no valid (t, theta) pair in the scan")
    octs = np.floor(np.log2(t)).astype(int)
    edges, omax = [], []
    for o in np.unique(octs):
        sel = ratios[octs == o]
        sel = sel[np.isfinite(sel)]
        if sel.size:
            edges.append(2.0 ** o)
            omax.append(float(sel.max()))
    return ChordBoundReport(t, thetas, ratios, float(finite.max()),
                            np.array(edges), np.array(omax), n_skipped)


@dataclass
class AnnulusBoundReport:
    """Observed constants for |annulus_ft| <= C sqrt(R/|xi|) min(1/|xi|, delta).

    ``c_hat`` is the largest observed ratio against the comparison quantity;
    ``c_by_xi`` tracks it per frequency magnitude, and ``growth_slope`` fits
    log c against log |xi|.  A slope near zero means the constant is genuine;
    sustained growth (a flat-sided body reaches slope 1/2 along its face
    normals) marks the bound as divergent.
    """

    rows: list
    c_hat: float
    xi_mags: np.ndarray
    c_by_xi: np.ndarray
    growth_slope: float
    divergent: bool


def annulus_bound_report(body: ConvexBody, R_values, xi_mags, deltas,
                         n_theta: int = 16,
                         divergence_slope: float = 0.25) -> AnnulusBoundReport:
    if body.dim != 2:
        raise CapabilityError("the annulus bound report is planar only")
    R_values = np.asarray(R_values, dtype=float).ravel()
    xi_mags = np.sort(np.asarray(xi_mags, dtype=float).ravel())
    deltas = np.asarray(deltas, dtype=float).ravel()
    if np.any(R_values <= 0) or np.any(xi_mags <= 0) or np.any(deltas <= 0):
        raise ValidationError("grids must be positive")
    th = math.pi * np.arange(n_theta) / n_theta
    omegas = np.stack([np.cos(th), np.sin(th)], axis=1)
    cache: dict = {}

    def ft_on_circle(radius: float) -> np.ndarray:
        key = round(radius, 12)
        if key not in cache:
            cache[key] = _transform(body, radius * omegas, "body")
        return cache[key]

    rows = []
    c_by_xi = np.zeros(xi_mags.size)
    for R in R_values:
        for delta in deltas:
            spec = AnnulusSpec(R, delta)  # validates delta <= R/10
            s1, s2 = spec.R, spec.R + spec.delta
            for k, q in enumerate(xi_mags):
                vals = np.abs((s2 ** 2) * ft_on_circle(s2 * q)
                              - (s1 ** 2) * ft_on_circle(s1 * q))
                rhs = math.sqrt(R / q) * min(1.0 / q, delta)
                ratio = vals / rhs
                j = int(np.argmax(ratio))
                rows.append((float(R), float(q), float(delta), float(th[j]),
                             float(vals[j]), float(rhs), float(ratio[j])))
                c_by_xi[k] = max(c_by_xi[k], float(ratio.max()))
    if len(xi_mags) >= 2:
        slope = float(np.polyfit(np.log(xi_mags), np.log(c_by_xi), 1)[0])
    else:
        slope = 0.0
    return AnnulusBoundReport(rows, float(c_by_xi.max()), xi_mags, c_by_xi,
                              slope, slope > divergence_slope)
