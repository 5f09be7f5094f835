"""Distance-set counting: exact oracles, fast-path equivalence, scans."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaugedist import (
    BudgetError,
    CapabilityError,
    InsufficientDataError,
    LpBall,
    PointSet,
    ValidationError,
    diamond,
    disk,
    distance_set,
    growth_scan,
    min_gap_trend,
    polygonality_probe,
    random_symmetric_hexagon,
    separated_check,
    square,
    well_distributed_check,
)

linf = LpBall(np.inf, (1.0, 1.0))
l1 = LpBall(1.0, (1.0, 1.0))


def test_lattice_point_count():
    for q, d in [(4, 2), (9, 2), (3, 3)]:
        S = PointSet.lattice(q, d)
        assert S.n == (q + 1) ** d
        assert S.dim == d


def test_explicit_dedup():
    S = PointSet.explicit(np.array([[0, 0], [1, 0], [0, 0], [1, 0]]))
    assert S.n == 2


def test_unit_square_distances():
    corners = PointSet.explicit(np.array([[0, 0], [1, 0], [0, 1], [1, 1]]))
    ds = distance_set(corners, disk(), "exact_rational")
    np.testing.assert_allclose(ds.values, [1.0, math.sqrt(2.0)])
    np.testing.assert_array_equal(ds.multiplicities, [4, 2])
    ds_inf = distance_set(corners, linf, "exact_rational")
    np.testing.assert_allclose(ds_inf.values, [1.0])
    np.testing.assert_array_equal(ds_inf.multiplicities, [6])


def test_lattice4_linf_exact():
    S = PointSet.lattice(4)
    fast = distance_set(S, linf, "exact_rational")
    brute = distance_set(PointSet.explicit(S.points.astype(np.int64)),
                         linf, "exact_rational")
    np.testing.assert_allclose(fast.values, [1.0, 2.0, 3.0, 4.0])
    np.testing.assert_array_equal(fast.values, brute.values)
    np.testing.assert_array_equal(fast.multiplicities, brute.multiplicities)
    assert fast.multiplicities.sum() == 25 * 24 // 2


def test_multiplicities_sum_to_pair_count(rng):
    bodies = [disk(), square(), diamond(), random_symmetric_hexagon(rng)]
    for q in (3, 7, 12):
        S = PointSet.lattice(q)
        n_pairs = S.n * (S.n - 1) // 2
        for body in bodies:
            ds = distance_set(S, body, "float_tol")
            assert ds.multiplicities.sum() == n_pairs
            assert ds.count == len(ds.values)
            assert np.all(np.diff(ds.values) > 0)
            gaps = np.diff(ds.values)
            assert ds.min_gap == pytest.approx(gaps.min())


def test_fast_path_matches_brute_force(rng):
    bodies = [disk(), square(), diamond(), random_symmetric_hexagon(rng)]
    for q in (8, 16, 24):
        S = PointSet.lattice(q)
        B = PointSet.explicit(S.points + 0.0)  # strips provenance
        for body in bodies:
            fast = distance_set(S, body, "float_tol")
            brute = distance_set(B, body, "float_tol")
            assert fast.count == brute.count
            np.testing.assert_allclose(fast.values, brute.values, rtol=1e-9)
            np.testing.assert_array_equal(fast.multiplicities,
                                          brute.multiplicities)


def test_fast_path_matches_brute_exact():
    S = PointSet.lattice(16)
    B = PointSet.explicit(S.points.astype(np.int64))
    for body in (disk(), linf, l1, diamond(), square()):
        fast = distance_set(S, body, "exact_rational")
        brute = distance_set(B, body, "exact_rational")
        np.testing.assert_array_equal(fast.values, brute.values)
        np.testing.assert_array_equal(fast.multiplicities, brute.multiplicities)
        assert fast.exact is not None


def test_sums_of_two_squares_oracle():
    for q in (8, 16, 32):
        want = len({a * a + b * b for a in range(q + 1) for b in range(q + 1)} - {0})
        ds = distance_set(PointSet.lattice(q), disk(), "exact_rational")
        assert ds.count == want


def test_linf_lattice_count_equals_q():
    for q in (16, 64):
        ds = distance_set(PointSet.lattice(q), linf, "exact_rational")
        assert ds.count == q
    ds1 = distance_set(PointSet.lattice(32), l1, "exact_rational")
    assert ds1.count == 2 * 32  # l1 values are the integers 1..2q


def test_isometry_invariance():
    S = PointSet.lattice(12)
    base = distance_set(S, disk(), "float_tol")
    for angle in (0.3, math.pi / 6, 1.2):
        R = PointSet.rotated_lattice(12, angle)
        rot = distance_set(R, disk(), "float_tol")
        assert rot.count == base.count
        np.testing.assert_allclose(rot.values, base.values, rtol=1e-9)


def test_scaling_covariance_exact():
    pts = np.array([[0, 0], [1, 0], [0, 1], [2, 2], [3, 1]], dtype=np.int64)
    # linf values are integers: any integer scale is exact in floats
    a = distance_set(PointSet.explicit(pts), linf, "exact_rational")
    b = distance_set(PointSet.explicit(3 * pts), linf, "exact_rational")
    np.testing.assert_array_equal(b.values, 3.0 * a.values)
    # Euclidean values are sqrt(int): scale by 4 so sqrt(16 k) = 4 sqrt(k)
    # holds bit-exactly under correctly rounded sqrt
    a = distance_set(PointSet.explicit(pts), disk(), "exact_rational")
    b = distance_set(PointSet.explicit(4 * pts), disk(), "exact_rational")
    np.testing.assert_array_equal(b.values, 4.0 * a.values)
    c = distance_set(PointSet.explicit(3 * pts), disk(), "exact_rational")
    np.testing.assert_allclose(c.values, 3.0 * a.values, rtol=1e-15)


def test_count_monotone_in_q(rng):
    hexg = random_symmetric_hexagon(rng)
    for body in (disk(), hexg):
        counts = [distance_set(PointSet.lattice(q), body, "float_tol").count
                  for q in (2, 4, 8, 12, 16)]
        assert all(c1 <= c2 for c1, c2 in zip(counts, counts[1:]))


def test_rotated_exact_mode_unsupported():
    with pytest.raises(CapabilityError):
        distance_set(PointSet.rotated_lattice(4, 0.5), disk(), "exact_rational")


def test_exact_mode_rejects_float_points():
    S = PointSet.explicit(np.array([[0.5, 0.25], [1.0, 0.75]]))
    with pytest.raises((CapabilityError, ValidationError)):
        distance_set(S, disk(), "exact_rational")


def test_exact_mode_fraction_points():
    pts = [(Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(0)),
           (Fraction(0), Fraction(3, 4))]
    S = PointSet.explicit(pts)
    ds = distance_set(S, diamond(), "exact_rational")
    assert ds.exact
    # l1 gauge of rational points: exact dyadic values
    assert ds.values.tolist() == [0.5, 0.75, 1.25]


def test_pair_cap_budget_error():
    rng = np.random.default_rng(1)
    S = PointSet.explicit(rng.normal(size=(200, 2)))
    with pytest.raises(BudgetError, match="cap"):
        distance_set(S, disk(), "float_tol", pair_cap=1000)


def test_jitter_validation():
    with pytest.raises(ValidationError):
        PointSet.perturbed_lattice(4, 0, 0.5)
    S = PointSet.perturbed_lattice(4, 0, 0.49)
    assert S.n == 25


def test_well_distributed_lattice():
    S = PointSet.lattice(16)
    rep = well_distributed_check(S, 1.5)
    assert rep.ok and rep.witness is None

    # delete a 3x3 block: a C=1.5 cube fits in the hole
    pts = S.points
    keep = ~((pts[:, 0] >= 3) & (pts[:, 0] <= 5)
             & (pts[:, 1] >= 3) & (pts[:, 1] <= 5))
    holed = PointSet.explicit(pts[keep])
    rep = well_distributed_check(holed, 1.5)
    assert not rep.ok
    # the witness certifies a genuinely empty cube
    w = np.asarray(rep.witness)
    inside = np.all((holed.points >= w - 1e-9)
                    & (holed.points <= w + 1.5 + 1e-9), axis=1)
    assert not inside.any()


def test_well_distributed_perturbed():
    S = PointSet.perturbed_lattice(16, 3, 0.25)
    assert well_distributed_check(S, 2.0).ok


def test_separated_lattice():
    rep = separated_check(PointSet.lattice(8), 1.0)
    assert rep.ok
    assert rep.min_distance == pytest.approx(1.0)

    pts = np.concatenate([PointSet.lattice(8).points, [[0.5, 0.0]]])
    rep = separated_check(PointSet.explicit(pts), 1.0)
    assert not rep.ok
    assert rep.min_distance == pytest.approx(0.5)


@given(st.floats(0.01, 3.1))
@settings(max_examples=20)
def test_separated_rotation_invariant(angle):
    rep = separated_check(PointSet.rotated_lattice(6, angle), 1.0)
    assert rep.ok


def test_growth_scan_octave_guard():
    with pytest.raises(InsufficientDataError):
        growth_scan(PointSet.lattice, linf, [8, 16, 32])


def test_growth_scan_linf_beta_one():
    rep = growth_scan(PointSet.lattice, linf, [8, 16, 32, 64],
                      alpha=2.0, mode="exact_rational")
    assert rep.beta == pytest.approx(1.0, abs=0.02)
    assert rep.bound == pytest.approx(1.0)
    assert rep.verdict
    assert polygonality_probe(rep) == "polygon_like"


def test_growth_scan_disk_curved():
    rep = growth_scan(PointSet.lattice, disk(), [8, 16, 32, 64],
                      mode="exact_rational")
    assert rep.beta > 1.4
    assert rep.verdict is None and rep.bound is None
    assert polygonality_probe(rep) == "curved_like"


def test_min_gap_trend_nonincreasing():
    trend = min_gap_trend(PointSet.lattice, disk(), [4, 8, 16])
    qs = [t[0] for t in trend]
    gaps = [t[1] for t in trend]
    assert qs == [4, 8, 16]
    assert all(a >= b for a, b in zip(gaps, gaps[1:]))


def test_threads_bit_identical(rng):
    hexg = random_symmetric_hexagon(rng)
    S = PointSet.lattice(32)
    a = distance_set(S, hexg, "float_tol", threads=1)
    b = distance_set(S, hexg, "float_tol", threads=4)
    np.testing.assert_array_equal(a.values, b.values)
