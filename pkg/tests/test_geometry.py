import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull as SciHull
from scipy.spatial import Delaunay

from crpmap import (
    CapacityError,
    CoverageError,
    Interval,
    Partition,
    SpacePartition,
    UniformSegment,
    convex_hull,
    family_distance,
    hausdorff_distance,
    hull_family,
    hull_intersection_type,
    induced_partition,
    interval_partition,
    sym_diff_distance,
    sym_diff_distance_with_error,
)
from oracles import bottleneck_brute, hausdorff_sampled


# --- convex hull ------------------------------------------------------------

def test_hull_vertices_match_scipy():
    rng = np.random.default_rng(3)
    for _ in range(25):
        pts = rng.normal(size=(int(rng.integers(3, 40)), 2))
        ours = convex_hull(pts)
        if ours.vertices.shape[0] < 3:
            continue  # degenerate draw; covered separately
        ref = SciHull(pts)
        ref_set = {tuple(np.round(pts[v], 10)) for v in ref.vertices}
        our_set = {tuple(np.round(v, 10)) for v in ours.vertices}
        assert our_set == ref_set


def test_hull_degenerate_inputs():
    point = convex_hull(np.array([[1.0, 2.0], [1.0, 2.0]]))
    assert point.vertices.shape[0] == 1

    seg = convex_hull(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [0.5, 0.5]]))
    assert seg.vertices.shape[0] == 2
    ends = {tuple(v) for v in seg.vertices}
    assert ends == {(0.0, 0.0), (2.0, 2.0)}

    one_d = convex_hull(np.array([[3.0], [-1.0], [2.0]]))
    assert one_d.dim == 1
    assert (one_d.lo, one_d.hi) == (-1.0, 3.0)
    assert one_d.contains([0.0])
    assert not one_d.contains([5.0])


def test_hull_membership_matches_delaunay():
    rng = np.random.default_rng(9)
    for _ in range(10):
        pts = rng.normal(size=(12, 2)) * 2.0
        hull = convex_hull(pts)
        tri = Delaunay(pts)
        queries = rng.normal(size=(300, 2)) * 2.5
        ref = tri.find_simplex(queries) >= 0
        for q, b in zip(queries, ref):
            if hull.contains(q) != b:
                # disagreement allowed only within numerical skin of the boundary
                d = np.abs(tri.plane_distance(q)).min()
                assert d < 1e-9


@settings(max_examples=50)
@given(
    st.lists(
        st.tuples(
            st.floats(min_value=-5, max_value=5, allow_nan=False),
            st.floats(min_value=-5, max_value=5, allow_nan=False),
        ),
        min_size=3,
        max_size=10,
    ),
    st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=3, max_size=10),
)
def test_hull_contains_convex_combinations(coords, weights):
    pts = np.array(coords)
    hull = convex_hull(pts)
    w = np.array(weights[: len(pts)] + [0.0] * max(0, len(pts) - len(weights)))
    w = w / w.sum()
    combo = (w[:, None] * pts).sum(axis=0)
    assert hull.contains(combo)


# --- intersection classification ---------------------------------------------

def tri(*vs):
    return convex_hull(np.array(vs, dtype=float))


def test_intersection_types_2d():
    a = tri([0, 0], [2, 0], [1, 2])
    assert hull_intersection_type(a, tri([5, 5], [6, 5], [5, 6])) == "disjoint"
    # shared vertex only
    assert hull_intersection_type(a, tri([2, 0], [4, 0], [3, -2])) == "single_point"
    # vertex of one touches an edge interior of the other
    assert hull_intersection_type(a, tri([1, -2], [3, -2], [1.5, 0])) == "single_point"
    # overlapping interiors
    assert hull_intersection_type(a, tri([1, 1], [3, 1], [2, 3])) == "overlap"
    # containment
    assert hull_intersection_type(a, tri([0.8, 0.4], [1.2, 0.4], [1.0, 0.8])) == "overlap"
    # edges overlapping along a segment
    b = tri([1, 0], [3, 0], [2, -2])
    assert hull_intersection_type(a, b) == "overlap"


def test_intersection_types_1d_and_degenerate():
    seg = lambda lo, hi: convex_hull(np.array([[lo], [hi]]))
    assert hull_intersection_type(seg(0, 1), seg(2, 3)) == "disjoint"
    assert hull_intersection_type(seg(0, 1), seg(1, 2)) == "single_point"
    assert hull_intersection_type(seg(0, 1.5), seg(1, 2)) == "overlap"

    pt = convex_hull(np.array([[1.0, 1.0]]))
    a = tri([0, 0], [2, 0], [1, 2])
    assert hull_intersection_type(pt, a) == "single_point"
    far = convex_hull(np.array([[9.0, 9.0]]))
    assert hull_intersection_type(far, a) == "disjoint"

    s1 = convex_hull(np.array([[0.0, 0.0], [2.0, 2.0]]))
    s2 = convex_hull(np.array([[0.0, 2.0], [2.0, 0.0]]))
    assert hull_intersection_type(s1, s2) == "single_point"
    s3 = convex_hull(np.array([[1.0, 1.0], [3.0, 3.0]]))
    assert hull_intersection_type(s1, s3) == "overlap"


def test_intersection_symmetry():
    rng = np.random.default_rng(4)
    for _ in range(30):
        a = convex_hull(rng.normal(size=(5, 2)))
        b = convex_hull(rng.normal(size=(5, 2)) + rng.normal() * 1.5)
        assert hull_intersection_type(a, b) == hull_intersection_type(b, a)


# --- Hausdorff ----------------------------------------------------------------

def test_hausdorff_translated_copies():
    sq = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    a = convex_hull(sq)
    for shift in ([3.0, 4.0], [0.2, 0.0], [-1.0, 2.0]):
        b = convex_hull(sq + np.array(shift))
        assert hausdorff_distance(a, b) == pytest.approx(
            np.linalg.norm(shift), abs=1e-12
        )


def test_hausdorff_nested_squares():
    outer = convex_hull(np.array([[-2, -2], [2, -2], [2, 2], [-2, 2]], dtype=float))
    inner = convex_hull(np.array([[-1, -1], [1, -1], [1, 1], [-1, 1]], dtype=float))
    # farthest point of the outer square from the inner one is a corner
    assert hausdorff_distance(outer, inner) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_hausdorff_matches_boundary_sampling():
    rng = np.random.default_rng(12)
    for _ in range(12):
        a = convex_hull(rng.normal(size=(7, 2)))
        b = convex_hull(rng.normal(size=(7, 2)) + rng.normal(scale=1.5, size=2))
        if a.vertices.shape[0] < 3 or b.vertices.shape[0] < 3:
            continue
        ref = hausdorff_sampled(a.vertices, b.vertices, per_edge=600)
        assert hausdorff_distance(a, b) == pytest.approx(ref, abs=2e-2)


def test_hausdorff_1d_intervals():
    a = convex_hull(np.array([[0.0], [2.0]]))
    b = convex_hull(np.array([[0.5], [5.0]]))
    assert hausdorff_distance(a, b) == pytest.approx(3.0, abs=1e-12)


def test_hausdorff_pseudometric_axioms():
    rng = np.random.default_rng(31)
    hulls = [convex_hull(rng.normal(size=(6, 2)) + rng.normal(scale=2, size=2)) for _ in range(12)]
    for h in hulls:
        assert hausdorff_distance(h, h) == pytest.approx(0.0, abs=1e-12)
    for i in range(len(hulls)):
        for j in range(i + 1, len(hulls)):
            dij = hausdorff_distance(hulls[i], hulls[j])
            assert dij == pytest.approx(hausdorff_distance(hulls[j], hulls[i]), abs=1e-12)
            for k in range(len(hulls)):
                dik = hausdorff_distance(hulls[i], hulls[k])
                dkj = hausdorff_distance(hulls[k], hulls[j])
                assert dij <= dik + dkj + 1e-9


# --- symmetric difference ------------------------------------------------------

def uniform_sym_diff(a, b, c, d):
    """P(A xor B) for intervals under uniform [-1, 1], by inclusion-exclusion."""
    clip = lambda lo, hi: max(0.0, min(hi, 1.0) - max(lo, -1.0)) / 2.0
    inter = clip(max(a, c), min(b, d))
    return clip(a, b) + clip(c, d) - 2 * inter


def test_sym_diff_closed_form_on_intervals():
    law = UniformSegment(-1.0, 1.0)
    cases = [(-0.5, 0.5, 0.0, 1.0), (-1.0, 0.0, 0.0, 1.0), (-0.2, 0.2, -0.2, 0.2)]
    for a, b, c, d in cases:
        got = sym_diff_distance(Interval(a, b), Interval(c, d), law)
        assert got == pytest.approx(uniform_sym_diff(a, b, c, d), abs=1e-12)


def test_sym_diff_monte_carlo_error_bar():
    law = UniformSegment(-1.0, 1.0)

    class Wavy:
        dim = 1

        def contains(self, pts):
            x = np.asarray(pts).reshape(-1)
            return np.sin(4 * x) > 0.0

    got, se = sym_diff_distance_with_error(Wavy(), Interval(0.0, 1.0), law, n_samples=200_000, seed=6)
    assert se > 0
    # reference by fine-grid integration of the xor indicator
    xs = np.linspace(-1, 1, 2_000_001)
    w = np.sin(4 * xs) > 0
    i = (xs >= 0.0) & (xs <= 1.0)
    ref = np.mean(w ^ i)
    assert abs(got - ref) < 3.5 * se + 1e-4


def test_sym_diff_pseudometric_triangle():
    rng = np.random.default_rng(8)
    law = UniformSegment(-1.0, 1.0)
    for _ in range(100):
        ivals = [Interval(*sorted(rng.uniform(-1.2, 1.2, 2))) for _ in range(3)]
        d01 = sym_diff_distance(ivals[0], ivals[1], law)
        d12 = sym_diff_distance(ivals[1], ivals[2], law)
        d02 = sym_diff_distance(ivals[0], ivals[2], law)
        assert d02 <= d01 + d12 + 1e-12
        assert d01 == pytest.approx(sym_diff_distance(ivals[1], ivals[0], law), abs=1e-12)
    assert sym_diff_distance(ivals[0], ivals[0], law) == 0.0


# --- family distance -----------------------------------------------------------

def test_family_distance_matches_bottleneck_oracle_hausdorff():
    rng = np.random.default_rng(13)
    for _ in range(15):
        k = int(rng.integers(2, 6))
        fa = [Interval(*sorted(rng.uniform(-3, 3, 2))) for _ in range(k)]
        fb = [Interval(*sorted(rng.uniform(-3, 3, 2))) for _ in range(k)]
        cost = np.array(
            [
                [max(abs(x.lo - y.lo), abs(x.hi - y.hi)) for y in fb]
                for x in fa
            ]
        )
        ref = bottleneck_brute(cost)
        assert family_distance(fa, fb, base="hausdorff") == pytest.approx(ref, abs=1e-12)


def test_family_distance_matches_bottleneck_oracle_sym_diff():
    rng = np.random.default_rng(14)
    law = UniformSegment(-1.0, 1.0)
    for _ in range(10):
        k = int(rng.integers(2, 5))
        fa = [Interval(*sorted(rng.uniform(-1, 1, 2))) for _ in range(k)]
        fb = [Interval(*sorted(rng.uniform(-1, 1, 2))) for _ in range(k)]
        cost = np.array(
            [[uniform_sym_diff(x.lo, x.hi, y.lo, y.hi) for y in fb] for x in fa]
        )
        ref = bottleneck_brute(cost)
        got = family_distance(fa, fb, base="sym_diff", P=law)
        assert got == pytest.approx(ref, abs=1e-12)


def test_family_distance_pads_unequal_sizes():
    law = UniformSegment(-1.0, 1.0)
    fa = [Interval(-1.0, 0.0), Interval(0.0, 1.0)]
    fb = [Interval(-1.0, 0.0)]
    # the unmatched region pays its own mass under the sym_diff base
    got = family_distance(fa, fb, base="sym_diff", P=law, K=2)
    assert got == pytest.approx(0.5, abs=1e-12)
    # under hausdorff there is no finite pad cost
    assert family_distance(fa, fb, base="hausdorff", K=2) == math.inf


def test_family_distance_capacity_guard():
    fa = [Interval(i, i + 0.5) for i in range(9)]
    with pytest.raises(CapacityError):
        family_distance(fa, fa, base="hausdorff")


def test_family_distance_accepts_space_partitions():
    pa = interval_partition([0.0])
    pb = interval_partition([0.1])
    law = UniformSegment(-1.0, 1.0)
    got = family_distance(pa, pb, base="sym_diff", P=law)
    assert got == pytest.approx(0.05, abs=1e-12)
    assert family_distance(pa, pa, base="sym_diff", P=law) == 0.0


# --- induced partitions ----------------------------------------------------------

def test_induced_partition_blocks_and_tie_rule():
    part = interval_partition([0.0, 1.0])
    pts = np.array([[-0.5], [0.0], [0.5], [2.0], [1.0]])
    ind = induced_partition(part, pts)
    # boundary points 0.0 and 1.0 join the lower-index region
    assert ind.blocks == ((0, 1), (2, 4), (3,))


def test_induced_partition_coverage_error():
    part = SpacePartition((Interval(0.0, 1.0),), coverage=False)
    with pytest.raises(CoverageError):
        induced_partition(part, np.array([[0.5], [2.0]]))


def test_hull_family_wraps_blocks():
    pts = np.array([[0.0, 0], [1, 0], [0.5, 1], [5, 5], [6, 5], [5.5, 6]])
    part = Partition.from_labels([0, 0, 0, 1, 1, 1])
    fam = hull_family(part, pts)
    assert len(fam) == 2
    assert fam[0].contains([0.5, 0.3])
    assert not fam[0].contains([5.5, 5.5])
    assert fam[1].contains([5.5, 5.5])
