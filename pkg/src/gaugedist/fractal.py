"""Cantor-type constructions, box dimension, and discrete energy integrals.

Digit-restricted Cantor iterates and their difference covers are exact:
every endpoint is a rational with denominator (2m)^n and every reported
length is an identity, not a float.  Diophantine cube families and
energy integrals are float-based trend instruments; the energy ladder
only ever claims growth or plateau across a T ladder, never convergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .bodies import ConvexBody
from .distset import PointSet, distance_set
from .errors import CapabilityError, InsufficientDataError, ValidationError

_MAX_CELLS = 10_000_000
_MAX_ATOMS = 1_000_000


@dataclass(frozen=True)
class IntervalUnion:
    """Disjoint sorted closed intervals with rational endpoints.

    Touching intervals are merged at construction, so the total length
    is an exact rational identity.
    """

    intervals: Tuple[Tuple[Fraction, Fraction], ...]

    @classmethod
    def build(cls, pairs) -> "IntervalUnion":
        norm = []
        for a, b in pairs:
            a, b = Fraction(a), Fraction(b)
            if b < a:
                raise ValidationError("interval endpoints out of order")
            norm.append((a, b))
        norm.sort()
        merged: List[Tuple[Fraction, Fraction]] = []
        for a, b in norm:
            if merged and a <= merged[-1][1]:
                if b > merged[-1][1]:
                    merged[-1] = (merged[-1][0], b)
            else:
                merged.append((a, b))
        return cls(tuple(merged))

    @classmethod
    def _from_numerators(cls, lo: np.ndarray, hi: np.ndarray, den: int) -> "IntervalUnion":
        """Merge integer-numerator intervals sharing one denominator.

        Merging happens in integer space; Fractions are built only for
        the merged result.
        """
        order = np.argsort(lo, kind="stable")
        lo = lo[order]
        hi = hi[order]
        m_lo, m_hi = [], []
        for a, b in zip(lo.tolist(), hi.tolist()):
            if m_hi and a <= m_hi[-1]:
                if b > m_hi[-1]:
                    m_hi[-1] = b
            else:
                m_lo.append(a)
                m_hi.append(b)
        return cls(tuple((Fraction(a, den), Fraction(b, den))
                         for a, b in zip(m_lo, m_hi)))

    @property
    def total_length(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))

    @property
    def count(self) -> int:
        return len(self.intervals)

    def contains_point(self, x) -> bool:
        x = Fraction(x)
        return any(a <= x <= b for a, b in self.intervals)

    def contains_union(self, other: "IntervalUnion") -> bool:
        """Exact containment test: every interval of other sits inside one of ours."""
        i = 0
        for a, b in other.intervals:
            while i < len(self.intervals) and self.intervals[i][1] < a:
                i += 1
            if i == len(self.intervals) or not (self.intervals[i][0] <= a and b <= self.intervals[i][1]):
                return False
        return True


@dataclass(frozen=True)
class CantorSpec:
    """Base-2m Cantor set keeping only even digits {0, 2, ..., 2m-2}.

    The depth-n iterate is exactly m^n closed intervals of length
    (2m)^{-n}.
    """

    m: int
    depth: int

    def __post_init__(self):
        if self.m < 2:
            raise ValidationError("base parameter m must be >= 2")
        if self.depth < 1:
            raise ValidationError("depth must be >= 1")

    @property
    def base(self) -> int:
        return 2 * self.m

    @property
    def cell_count(self) -> int:
        return self.m ** self.depth

    @property
    def cell_length(self) -> Fraction:
        return Fraction(1, self.base ** self.depth)


def _digit_numerators(spec: CantorSpec) -> np.ndarray:
    """Left endpoints of all depth-n cells as integers over base^depth."""
    digits = np.arange(0, spec.base, 2, dtype=np.int64)
    nums = np.zeros(1, dtype=np.int64)
    for _ in range(spec.depth):
        nums = (nums[:, None] * spec.base + digits[None, :]).ravel()
    return nums


def cantor_build(spec: CantorSpec) -> IntervalUnion:
    """Exact depth-n iterate as an interval union."""
    if spec.cell_count > _MAX_CELLS:
        raise ValidationError(f"cell count {spec.cell_count} exceeds {_MAX_CELLS}")
    nums = _digit_numerators(spec)
    den = spec.base ** spec.depth
    return IntervalUnion._from_numerators(nums, nums + 1, den)


@dataclass(frozen=True)
class DifferenceCover:
    """Interval cover of the absolute difference set of a Cantor iterate.

    pre_merge_count and pre_merge_length are the exact enumeration
    identities (2m-1)^n and 2 (2m-1)^n (2m)^{-n}; union is the merged
    cover of {|x - y|}.
    """

    spec: CantorSpec
    union: IntervalUnion
    pre_merge_count: int
    pre_merge_length: Fraction


def difference_cover(spec: CantorSpec) -> DifferenceCover:
    """Cover {|x-y| : x,y in the iterate} by digit-difference enumeration.

    Each pair of depth-n cells differs by a string of even digit
    differences; the distinct signed strings give (2m-1)^n centers, and
    each center covers a 2(2m)^{-n} window of differences.
    """
    pre = (2 * spec.m - 1) ** spec.depth
    if pre > _MAX_CELLS:
        raise ValidationError(f"difference count {pre} exceeds {_MAX_CELLS}")
    diffs = np.arange(-(spec.base - 2), spec.base - 1, 2, dtype=np.int64)
    nums = np.zeros(1, dtype=np.int64)
    for _ in range(spec.depth):
        nums = (nums[:, None] * spec.base + diffs[None, :]).ravel()
    # digit strings encode distinct values: tails are too small to collide
    if len(np.unique(nums)) != pre:
        raise ValidationError("digit-difference enumeration produced collisions")
    den = spec.base ** spec.depth
    centers = np.unique(np.abs(nums))
    los = np.maximum(centers - 1, 0)
    union = IntervalUnion._from_numerators(los, centers + 1, den)
    pre_len = 2 * Fraction(pre, den)
    return DifferenceCover(spec, union, int(pre), pre_len)


def _grid_count_1d(iu: IntervalUnion, eps: Fraction) -> int:
    """Cells [k eps, (k+1) eps) hit by the union, counted exactly.

    The right endpoint of an interval lands in the previous cell when it
    sits exactly on the grid, so a full interval of length 1 occupies
    exactly 1/eps cells.
    """
    ranges = []
    for a, b in iu.intervals:
        lo = math.floor(a / eps)
        hi_frac = b / eps
        hi = int(hi_frac) if hi_frac.denominator == 1 else math.floor(hi_frac)
        if hi_frac.denominator == 1 and b > a:
            hi -= 1
        ranges.append((lo, max(hi, lo)))
    ranges.sort()
    total = 0
    cur_lo, cur_hi = None, None
    for lo, hi in ranges:
        if cur_hi is not None and lo <= cur_hi:
            cur_hi = max(cur_hi, hi)
        else:
            if cur_hi is not None:
                total += cur_hi - cur_lo + 1
            cur_lo, cur_hi = lo, hi
    if cur_hi is not None:
        total += cur_hi - cur_lo + 1
    return total


def _grid_count_points(pts: np.ndarray, eps: float) -> int:
    idx = np.floor(pts / eps).astype(np.int64)
    # domain [0,1]^d: the upper face belongs to the last cell
    nmax = int(math.ceil(1.0 / eps - 1e-12))
    idx = np.minimum(idx, nmax - 1)
    return len(np.unique(idx, axis=0))


BoxCountable = Union[IntervalUnion, PointSet, Tuple[IntervalUnion, ...]]


def box_dim(obj: BoxCountable, scales: Sequence) -> float:
    """Box-counting dimension estimate over dyadic scales.

    Fits log N(eps) against log(1/eps) by least squares.  Interval
    unions (and product tuples of them) are counted exactly in rational
    arithmetic; point sets are binned in floats on [0,1]^d.
    """
    eps_list = sorted(scales, reverse=True)
    if len(eps_list) < 3:
        raise InsufficientDataError("box_dim needs at least 3 scales")
    counts = []
    for eps in eps_list:
        if isinstance(obj, IntervalUnion):
            n = _grid_count_1d(obj, Fraction(eps))
        elif isinstance(obj, tuple):
            n = 1
            for axis_iu in obj:
                n *= _grid_count_1d(axis_iu, Fraction(eps))
        elif isinstance(obj, PointSet):
            n = _grid_count_points(obj.points, float(eps))
        else:
            raise CapabilityError(f"cannot box-count {type(obj).__name__}")
        counts.append(n)
    x = np.log(1.0 / np.array([float(e) for e in eps_list]))
    y = np.log(np.array(counts, dtype=float))
    A = np.stack([np.ones_like(x), x], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(coef[1])


# ---------------------------------------------------------------------------
# diophantine cube families


@dataclass(frozen=True)
class DioSpec:
    """Cubes of half-side q^{-d/s} at rational centers p/q, p in S."""

    S: PointSet
    q: int
    s: float

    def __post_init__(self):
        if self.q < 1:
            raise ValidationError("q must be >= 1")
        d = self.S.dim
        if not 0 < self.s <= d:
            raise ValidationError(f"s must lie in (0, {d}]")

    @property
    def half_side(self) -> float:
        return float(self.q) ** (-self.S.dim / self.s)


@dataclass(frozen=True)
class DioSet:
    """Finite-stage diophantine set: clipped cubes around center points.

    disjoint reports the 2 q^{-d/s} < 1/q spacing diagnostic; the
    dimension count downstream assumes near-disjointness, overlap is
    merely merged.
    """

    spec: DioSpec
    centers: np.ndarray
    half_side: float
    disjoint: bool

    @property
    def count(self) -> int:
        return len(self.centers)

    def axis_union(self, axis: int = 0):
        """Merged 1d shadow of the cubes along one axis, clipped to [0,1]."""
        lo = np.clip(self.centers[:, axis] - self.half_side, 0.0, 1.0)
        hi = np.clip(self.centers[:, axis] + self.half_side, 0.0, 1.0)
        order = np.argsort(lo)
        merged = []
        for a, b in zip(lo[order], hi[order]):
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return [(float(a), float(b)) for a, b in merged]


def dio_build(spec: DioSpec) -> DioSet:
    """Cubes |x_j - p_j/q| <= q^{-d/s} for p in S cap [0,q]^d, clipped to [0,1]^d."""
    pts = spec.S.points
    inside = np.all((pts >= -1e-12) & (pts <= spec.q + 1e-12), axis=1)
    centers = pts[inside] / spec.q
    if len(centers) == 0:
        raise ValidationError("no generator points inside [0, q]^d")
    h = spec.half_side
    disjoint = 2.0 * h < 1.0 / spec.q
    return DioSet(spec, centers, h, disjoint)


@dataclass(frozen=True)
class DeltaCover:
    """Interval cover of the distance set of a diophantine stage.

    One window per distinct generator distance; count therefore equals
    the distinct-distance count of (S, body) at this q.
    """

    intervals: Tuple[Tuple[float, float], ...]
    count: int
    half_width: float
    total_length: float


def _corner_gauge(body: ConvexBody, d: int) -> float:
    """max gauge over the unit sup-norm cube; attained at a corner by convexity."""
    corners = np.array(np.meshgrid(*([[-1.0, 1.0]] * d), indexing="ij")).reshape(d, -1).T
    return float(np.max(body.gauge(corners)))


def delta_cover(spec: DioSpec, body: ConvexBody, *, mode: str = "float_tol") -> DeltaCover:
    """Cover the K-distance set of the cube family by one window per value.

    Points inside two cubes sit within 2h of their centers in sup norm,
    so each K-distance lies within 2h * (corner gauge) of a center
    distance; windows have total width 4h * cornergauge before merging.
    """
    ds = distance_set(spec.S, body, mode)
    h = spec.half_side
    g = _corner_gauge(body, spec.S.dim)
    half_w = 2.0 * h * g
    vals = ds.values / spec.q
    lo = np.maximum(vals - half_w, 0.0)
    hi = vals + half_w
    merged: List[List[float]] = []
    for a, b in zip(lo, hi):
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    total = float(sum(b - a for a, b in merged))
    return DeltaCover(tuple((float(a), float(b)) for a, b in merged),
                      ds.count, half_w, total)


# ---------------------------------------------------------------------------
# atomic measures and energy integrals


@dataclass
class AtomicMeasure:
    """Finitely many atoms with positive weights summing to 1.

    When built from a product construction the per-axis factor measure
    is kept so the transform factorizes; the exponential sum then runs
    over m^n atoms per axis instead of m^{dn} atoms.
    """

    points: np.ndarray
    weights: np.ndarray
    exact_weights: Optional[List[Fraction]] = None
    factor: Optional["AtomicMeasure"] = None

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        self.weights = np.asarray(self.weights, dtype=float)
        if len(self.weights) != len(self.points):
            raise ValidationError("one weight per atom required")
        if np.any(self.weights <= 0):
            raise ValidationError("weights must be positive")
        if self.exact_weights is not None:
            if sum(self.exact_weights, Fraction(0)) != 1:
                raise ValidationError("exact weights must sum to 1")
        elif abs(self.weights.sum() - 1.0) > 1e-9:
            raise ValidationError("weights must sum to 1")

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def mass(self):
        if self.exact_weights is not None:
            return sum(self.exact_weights, Fraction(0))
        return float(self.weights.sum())

    def ft(self, xi: np.ndarray) -> np.ndarray:
        """mu-hat(xi) = sum_j w_j exp(-2 pi i x_j . xi), exact finite sum.

        Evaluated in row blocks so large polar grids stay within a few
        hundred MB regardless of atom count.
        """
        xi = np.atleast_2d(np.asarray(xi, dtype=float))
        factored = self.factor is not None and self.factor.dim == 1
        n_atoms = len(self.factor.points) if factored else len(self.points)
        block = max(1024, int(16_000_000 // max(n_atoms, 1)))
        out = np.empty(len(xi), dtype=complex)
        for a in range(0, len(xi), block):
            sub = xi[a:a + block]
            if factored:
                acc = np.ones(len(sub), dtype=complex)
                atoms = self.factor.points[:, 0]
                w = self.factor.weights
                for j in range(sub.shape[1]):
                    acc *= np.exp(-2j * np.pi * np.outer(sub[:, j], atoms)) @ w
                out[a:a + block] = acc
            else:
                out[a:a + block] = np.exp(-2j * np.pi * (sub @ self.points.T)) @ self.weights
        return out


def natural_measure(spec: CantorSpec, dims: int = 1) -> AtomicMeasure:
    """Uniform weights on depth-n cell centers (product across dims axes)."""
    n_atoms = spec.cell_count ** dims
    if n_atoms > _MAX_ATOMS:
        raise ValidationError(f"atom count {n_atoms} exceeds {_MAX_ATOMS}")
    nums = _digit_numerators(spec)
    den = spec.base ** spec.depth
    centers_1d = (nums.astype(float) + 0.5) / den
    w_1d = np.full(len(nums), 1.0 / len(nums))
    exact_1d = [Fraction(1, len(nums))] * len(nums)
    base = AtomicMeasure(centers_1d[:, None], w_1d, exact_1d)
    if dims == 1:
        return base
    grids = np.meshgrid(*([centers_1d] * dims), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    w = np.full(len(pts), 1.0 / len(pts))
    exact = [Fraction(1, len(pts))] * len(pts)
    return AtomicMeasure(pts, w, exact, factor=base)


def energy_integral(mu: AtomicMeasure, gamma: float, T: float, *,
                    n_r: Optional[int] = None, n_theta: Optional[int] = None) -> float:
    """integral of |xi|^{-gamma} |mu-hat|^2 over the annulus 1 <= |xi| <= T.

    Polar-grid quadrature in d = 2; the unit ball is excluded so the
    integrable singularity cannot contaminate trend reads.  Atomic
    measures make this a trend instrument, not a convergence test.
    """
    d = mu.dim
    if d != 2:
        raise CapabilityError("energy integrals are evaluated in d = 2 only")
    if not 0 < gamma < d:
        raise ValidationError(f"gamma must lie in (0, {d})")
    if T <= 1:
        raise ValidationError("T must exceed 1")
    # diam(support) <= sqrt(2) on the unit square: ~8 radial nodes per unit
    # resolves the exponential-sum oscillation envelope
    if n_r is None:
        n_r = max(128, int(8 * T))
    if n_theta is None:
        n_theta = max(64, int(4 * T))
    r = np.linspace(1.0, float(T), n_r)
    theta = (np.arange(n_theta) + 0.5) * (np.pi / n_theta)  # half circle, |mu-hat| even
    xi = np.empty((n_r * n_theta, 2))
    xi[:, 0] = np.outer(r, np.cos(theta)).ravel()
    xi[:, 1] = np.outer(r, np.sin(theta)).ravel()
    power = np.abs(mu.ft(xi)) ** 2
    power = power.reshape(n_r, n_theta)
    ang = power.mean(axis=1) * (2.0 * np.pi)  # full-circle angular integral
    integrand = r ** (1.0 - gamma) * ang
    return float(np.trapezoid(integrand, r))


# Increment-ratio bands for the ladder trend.  Log-periodic modulation
# of Cantor-type measures moves octave increments by ~10% either way,
# so the growth call needs a clear margin above flat.
_GROWTH_RATIO = 1.15
_DECAY_RATIO = 0.85


@dataclass(frozen=True)
class EnergyLadder:
    """Energy integrals across a T ladder with increment trend labels."""

    T_values: Tuple[float, ...]
    integrals: Tuple[float, ...]
    increments: Tuple[float, ...]
    trend: str  # growth | plateau | decay | mixed


def energy_ladder(mu: AtomicMeasure, gamma: float, T_list: Sequence[float]) -> EnergyLadder:
    """Evaluate the energy integral at each T and classify the increments.

    Clearly growing increments mirror a divergent continuum energy
    (gamma below the critical index); flat (plateauing) or shrinking
    increments mirror a convergent one.
    """
    Ts = sorted(float(t) for t in T_list)
    if len(Ts) < 3:
        raise InsufficientDataError("a trend needs at least 3 ladder points")
    vals = [energy_integral(mu, gamma, T) for T in Ts]
    incs = [b - a for a, b in zip(vals, vals[1:])]
    ratios = [b / a for a, b in zip(incs, incs[1:])]
    if all(r >= _GROWTH_RATIO for r in ratios):
        trend = "growth"
    elif all(r <= _DECAY_RATIO for r in ratios):
        trend = "decay"
    elif all(_DECAY_RATIO < r < _GROWTH_RATIO for r in ratios):
        trend = "plateau"
    else:
        trend = "mixed"
    return EnergyLadder(tuple(Ts), tuple(vals), tuple(incs), trend)
