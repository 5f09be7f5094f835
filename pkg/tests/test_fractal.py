"""Cantor iterates, difference covers, box counting, energy ladders."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gaugedist import (
    AtomicMeasure,
    CantorSpec,
    CapabilityError,
    DioSpec,
    InsufficientDataError,
    IntervalUnion,
    LpBall,
    PointSet,
    ValidationError,
    box_dim,
    cantor_build,
    delta_cover,
    difference_cover,
    dio_build,
    disk,
    distance_set,
    energy_integral,
    energy_ladder,
    natural_measure,
)

linf = LpBall(np.inf, (1.0, 1.0))


def _refine(intervals, m):
    # independent recursive constructor: split each cell into 2m parts,
    # keep the even-indexed ones
    base = 2 * m
    out = []
    for a, b in intervals:
        w = (b - a) / base
        for dgt in range(0, base, 2):
            out.append((a + dgt * w, a + dgt * w + w))
    return out


# ---------------------------------------------------------------------------
# interval unions


def test_interval_union_merges_touching():
    iu = IntervalUnion.build([(Fraction(1, 2), Fraction(3, 4)),
                              (Fraction(0), Fraction(1, 2))])
    assert iu.count == 1
    assert iu.intervals == ((Fraction(0), Fraction(3, 4)),)
    assert iu.total_length == Fraction(3, 4)


def test_interval_union_rejects_reversed():
    with pytest.raises(ValidationError):
        IntervalUnion.build([(Fraction(1), Fraction(0))])


def test_interval_union_membership():
    iu = IntervalUnion.build([(0, Fraction(1, 4)), (Fraction(1, 2), 1)])
    assert iu.contains_point(Fraction(1, 8))
    assert iu.contains_point(Fraction(1, 4))
    assert not iu.contains_point(Fraction(3, 8))
    sub = IntervalUnion.build([(Fraction(1, 16), Fraction(1, 8)),
                               (Fraction(3, 4), Fraction(7, 8))])
    assert iu.contains_union(sub)
    straddle = IntervalUnion.build([(Fraction(1, 8), Fraction(3, 8))])
    assert not iu.contains_union(straddle)


# ---------------------------------------------------------------------------
# cantor iterates


def test_cantor_depth1_exact():
    iu = cantor_build(CantorSpec(m=2, depth=1))
    assert iu.intervals == ((Fraction(0), Fraction(1, 4)),
                            (Fraction(1, 2), Fraction(3, 4)))


def test_cantor_counting_identities():
    for m, n in [(2, 8), (3, 2), (2, 5), (4, 3)]:
        spec = CantorSpec(m=m, depth=n)
        iu = cantor_build(spec)
        assert iu.count == m ** n
        # every cell has the depth-n width, nothing merged
        assert all(b - a == spec.cell_length for a, b in iu.intervals)
        assert iu.total_length == Fraction(m, 2 * m) ** n


def test_cantor_depth8_total_length():
    iu = cantor_build(CantorSpec(m=2, depth=8))
    assert iu.count == 256
    assert iu.total_length == Fraction(1, 256)


def test_cantor_matches_recursive_refinement():
    for m, n in [(2, 6), (3, 3)]:
        ivs = [(Fraction(0), Fraction(1))]
        for _ in range(n):
            ivs = _refine(ivs, m)
        want = IntervalUnion.build(ivs)
        assert cantor_build(CantorSpec(m=m, depth=n)).intervals == want.intervals


def test_cantor_nesting():
    for m in (2, 3):
        prev = cantor_build(CantorSpec(m=m, depth=1))
        for n in range(2, 6):
            cur = cantor_build(CantorSpec(m=m, depth=n))
            assert prev.contains_union(cur)
            prev = cur


def test_cantor_spec_validation():
    with pytest.raises(ValidationError):
        CantorSpec(m=1, depth=3)
    with pytest.raises(ValidationError):
        CantorSpec(m=2, depth=0)
    with pytest.raises(ValidationError):
        cantor_build(CantorSpec(m=2, depth=24))  # 2^24 cells over budget


# ---------------------------------------------------------------------------
# difference covers


def test_difference_cover_depth1():
    rep = difference_cover(CantorSpec(m=2, depth=1))
    assert rep.pre_merge_count == 3
    assert rep.pre_merge_length == Fraction(3, 2)
    # centers {0, 1/2} widen to [0,1/4] and [1/4,3/4], merging to [0,3/4]
    assert rep.union.intervals == ((Fraction(0), Fraction(3, 4)),)
    assert rep.union.total_length == Fraction(3, 4)


def test_difference_cover_premerge_identities():
    for m, n in [(2, 1), (2, 7), (2, 12), (3, 4)]:
        rep = difference_cover(CantorSpec(m=m, depth=n))
        assert rep.pre_merge_count == (2 * m - 1) ** n
        assert rep.pre_merge_length == 2 * Fraction(2 * m - 1, 2 * m) ** n


def test_difference_cover_shrinks():
    rep = difference_cover(CantorSpec(m=2, depth=10))
    assert rep.union.total_length < Fraction(12, 100)
    # merged length can only shrink
    assert rep.union.total_length <= rep.pre_merge_length


def test_difference_cover_covers_actual_differences(rng):
    spec = CantorSpec(m=2, depth=5)
    iu = cantor_build(spec)
    cover = difference_cover(spec).union
    cells = iu.intervals
    w = spec.cell_length
    for _ in range(200):
        i, j = rng.integers(0, len(cells), size=2)
        # rational offsets keep |x - y| exact
        x = cells[i][0] + Fraction(int(rng.integers(0, 65)), 64) * w
        y = cells[j][0] + Fraction(int(rng.integers(0, 65)), 64) * w
        assert cover.contains_point(abs(x - y))


# ---------------------------------------------------------------------------
# box counting


def test_box_dim_full_interval():
    iu = IntervalUnion.build([(0, 1)])
    scales = [Fraction(1, 2 ** k) for k in range(1, 9)]
    assert abs(box_dim(iu, scales) - 1.0) < 0.01


def test_box_dim_single_interval_lower_bound():
    # spans misaligned with the dyadic grid still fit within 0.01 of 1
    for pair in [(Fraction(0), Fraction(1, 3)), (Fraction(1, 5), Fraction(9, 10))]:
        iu = IntervalUnion.build([pair])
        scales = [Fraction(1, 2 ** k) for k in range(6, 17)]
        assert box_dim(iu, scales) >= 1.0 - 0.01


def test_box_dim_cantor_half():
    iu = cantor_build(CantorSpec(m=2, depth=10))
    scales = [Fraction(1, 4 ** j) for j in range(1, 11)]
    assert abs(box_dim(iu, scales) - 0.5) < 0.05


def test_box_dim_product():
    iu = cantor_build(CantorSpec(m=2, depth=8))
    scales = [Fraction(1, 4 ** j) for j in range(1, 9)]
    assert abs(box_dim((iu, iu), scales) - 1.0) < 0.1


def test_box_dim_point_set():
    S = PointSet.lattice(16)
    pts = PointSet.explicit(S.points / 16.0)
    scales = [0.5 ** k for k in range(1, 5)]
    assert abs(box_dim(pts, scales) - 2.0) < 0.05


def test_box_dim_guards():
    iu = IntervalUnion.build([(0, 1)])
    with pytest.raises(InsufficientDataError):
        box_dim(iu, [Fraction(1, 2), Fraction(1, 4)])
    with pytest.raises(CapabilityError):
        box_dim("not countable", [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)])


# ---------------------------------------------------------------------------
# diophantine cube families


def test_dio_lattice_q4():
    spec = DioSpec(PointSet.lattice(4), q=4, s=1.0)
    ds = dio_build(spec)
    assert ds.count == 25
    assert ds.half_side == 4.0 ** -2
    assert ds.disjoint


def test_dio_overlapping_shadow_covers_unit_interval():
    spec = DioSpec(PointSet.lattice(4), q=4, s=2.0)
    ds = dio_build(spec)
    assert ds.half_side == 0.25
    assert not ds.disjoint
    assert ds.axis_union(0) == [(0.0, 1.0)]


def test_dio_rotated_generator_count():
    S = PointSet.rotated_lattice(9, math.pi / 6)
    ds = dio_build(DioSpec(S, q=9, s=1.0))
    inside = np.all((S.points >= -1e-12) & (S.points <= 9 + 1e-12), axis=1)
    assert ds.count == int(inside.sum())


def test_dio_spec_validation():
    S = PointSet.lattice(4)
    with pytest.raises(ValidationError):
        DioSpec(S, q=0, s=1.0)
    with pytest.raises(ValidationError):
        DioSpec(S, q=4, s=0.0)
    with pytest.raises(ValidationError):
        DioSpec(S, q=4, s=2.5)
    with pytest.raises(ValidationError):
        dio_build(DioSpec(PointSet.explicit([[20.0, 20.0]]), q=4, s=1.0))


# ---------------------------------------------------------------------------
# delta covers


def test_delta_cover_linf_lattice():
    spec = DioSpec(PointSet.lattice(16), q=16, s=1.0)
    rep = delta_cover(spec, linf)
    assert rep.count == 16
    assert rep.half_width == 2.0 * 16.0 ** -2
    assert 0.0 < rep.total_length <= 0.25 + 1e-12


def test_delta_cover_count_matches_distance_set():
    S = PointSet.lattice(16)
    for body in (linf, disk()):
        rep = delta_cover(DioSpec(S, q=16, s=1.0), body)
        assert rep.count == distance_set(S, body).count
        assert rep.total_length <= rep.count * 2.0 * rep.half_width + 1e-12


def test_delta_cover_covers_cube_distances(rng):
    spec = DioSpec(PointSet.lattice(8), q=8, s=1.0)
    ds = dio_build(spec)
    body = disk()
    rep = delta_cover(spec, body)
    lo = np.array([a for a, _ in rep.intervals])
    hi = np.array([b for _, b in rep.intervals])
    idx = rng.integers(0, ds.count, size=(300, 2))
    # one window per distinct center distance: same-cube pairs are out of scope
    idx = idx[idx[:, 0] != idx[:, 1]]
    off = rng.uniform(-ds.half_side, ds.half_side, size=(len(idx), 2, 2))
    x = ds.centers[idx[:, 0]] + off[:, 0]
    y = ds.centers[idx[:, 1]] + off[:, 1]
    vals = body.gauge(x - y)
    for v in vals:
        assert np.any((lo <= v + 1e-12) & (v - 1e-12 <= hi))


# ---------------------------------------------------------------------------
# atomic measures


def test_natural_measure_counts():
    mu = natural_measure(CantorSpec(m=2, depth=2))
    assert len(mu.points) == 4
    assert mu.mass() == Fraction(1)
    assert np.allclose(mu.weights, 0.25)
    prod = natural_measure(CantorSpec(m=2, depth=2), dims=2)
    assert len(prod.points) == 16
    assert prod.mass() == Fraction(1)
    assert prod.factor is not None


def test_natural_measure_atom_budget():
    with pytest.raises(ValidationError):
        natural_measure(CantorSpec(m=2, depth=10), dims=2)


def test_atomic_measure_validation():
    pts = np.array([[0.0, 0.0], [0.5, 0.5]])
    with pytest.raises(ValidationError):
        AtomicMeasure(pts, [0.5, 0.6])
    with pytest.raises(ValidationError):
        AtomicMeasure(pts, [1.5, -0.5])
    with pytest.raises(ValidationError):
        AtomicMeasure(pts, [0.5])
    with pytest.raises(ValidationError):
        AtomicMeasure(pts, [0.5, 0.5],
                      exact_weights=[Fraction(1, 3), Fraction(1, 3)])


def test_ft_single_atom_modulus_one():
    mu = AtomicMeasure([[0.3, 0.7]], [1.0])
    xi = np.array([[1.0, 0.0], [2.5, -3.0], [0.0, 0.0]])
    vals = mu.ft(xi)
    assert np.allclose(np.abs(vals), 1.0, atol=1e-12)
    want = np.exp(-2j * np.pi * (xi @ np.array([0.3, 0.7])))
    assert np.allclose(vals, want, atol=1e-12)


def test_ft_two_atoms_closed_form(rng):
    mu = AtomicMeasure([[0.0, 0.0], [0.5, 0.0]], [0.5, 0.5])
    xi = rng.uniform(-8, 8, size=(50, 2))
    want = 0.5 * (1.0 + np.exp(-1j * np.pi * xi[:, 0]))
    assert np.allclose(mu.ft(xi), want, atol=1e-12)
    assert abs(mu.ft(np.array([[1.0, 0.0]]))[0]) < 1e-12


def test_ft_factored_matches_direct(rng):
    mu = natural_measure(CantorSpec(m=2, depth=3), dims=2)
    xi = rng.uniform(-20, 20, size=(40, 2))
    direct = np.exp(-2j * np.pi * (xi @ mu.points.T)) @ mu.weights
    assert np.allclose(mu.ft(xi), direct, atol=1e-10)


# ---------------------------------------------------------------------------
# energy integrals


def test_energy_point_mass_closed_form():
    mu = AtomicMeasure([[0.3, 0.4]], [1.0])
    # gamma = 1 makes the radial integrand constant: 2 pi (T - 1) exactly
    for T in (32.0, 64.0):
        val = energy_integral(mu, 1.0, T)
        assert abs(val - 2.0 * np.pi * (T - 1.0)) < 1e-8 * T
    ratio = energy_integral(mu, 1.0, 64.0) / energy_integral(mu, 1.0, 32.0)
    assert abs(ratio - 2.0) < 0.2
    val = energy_integral(mu, 0.5, 32.0)
    want = 2.0 * np.pi * (32.0 ** 1.5 - 1.0) / 1.5
    assert abs(val - want) / want < 1e-3


def test_energy_validation():
    mu = AtomicMeasure([[0.3, 0.4]], [1.0])
    with pytest.raises(ValidationError):
        energy_integral(mu, 2.0, 16.0)
    with pytest.raises(ValidationError):
        energy_integral(mu, 0.0, 16.0)
    with pytest.raises(ValidationError):
        energy_integral(mu, 1.0, 1.0)
    line = natural_measure(CantorSpec(m=2, depth=2))
    with pytest.raises(CapabilityError):
        energy_integral(line, 1.0, 16.0)


def test_energy_ladder_point_mass_growth():
    mu = AtomicMeasure([[0.25, 0.6]], [1.0])
    lad = energy_ladder(mu, 1.0, [16.0, 32.0, 64.0])
    assert lad.trend == "growth"
    assert len(lad.increments) == 2
    assert lad.integrals == tuple(sorted(lad.integrals))


def test_energy_ladder_needs_three_points():
    mu = AtomicMeasure([[0.25, 0.6]], [1.0])
    with pytest.raises(InsufficientDataError):
        energy_ladder(mu, 1.0, [16.0, 32.0])


def test_energy_ladder_cantor_trends():
    # product measure has dimension 1; gamma brackets the critical index
    mu = natural_measure(CantorSpec(m=2, depth=8), dims=2)
    low = energy_ladder(mu, 0.8, [16.0, 32.0, 64.0])
    assert low.trend == "growth"
    high = energy_ladder(mu, 1.2, [16.0, 32.0, 64.0])
    assert high.trend in ("plateau", "decay")
