import math

import numpy as np
import pytest
import shapely
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import convex_intersection_area, monte_carlo_fraction
from overlapbounds import boolean_ops
from overlapbounds.boolean_ops import (
    RobustnessError,
    difference,
    from_shapely,
    intersection,
    intersection_area,
    overlap_value,
    symdiff_area,
    symmetric_difference,
    to_shapely,
    union,
    union_area,
)
from overlapbounds.geometry import RigidMotion2, apply_motion, area, convex_hull, points_in_ring
from overlapbounds.grid_oracle import mask_intersection_area, rasterize
from overlapbounds.shapes import (
    comb,
    l_shape,
    random_convex_polygon,
    random_star_polygon,
    rectangle,
    square_with_hole,
    unit_square,
)

OCTAGON = 2 * math.sqrt(2) - 2
seeds = st.integers(0, 2**32 - 1)


def shifted(shape, x, y=0.0):
    return apply_motion(shape, RigidMotion2(0.0, (x, y)))


def test_intersection_examples():
    sq = unit_square()
    assert intersection_area(sq, sq) == pytest.approx(1.0, abs=1e-12)
    assert intersection_area(sq, shifted(sq, 0.5)) == pytest.approx(0.5, abs=1e-12)
    c = unit_square(centered=True)
    rot = apply_motion(c, RigidMotion2(math.pi / 4))
    assert intersection_area(c, rot) == pytest.approx(OCTAGON, abs=1e-12)


def test_octagon_against_grid_oracle():
    c = unit_square(centered=True)
    rot = apply_motion(c, RigidMotion2(math.pi / 4))
    h = 1e-3
    est = mask_intersection_area(rasterize(c, h), rasterize(rot, h))
    # each cell-center misclassification is confined to an h-band around the boundaries
    assert abs(est - OCTAGON) <= 2 * h * 8


def test_symdiff_examples():
    sq = unit_square()
    assert symdiff_area(sq, sq) == 0.0
    assert symdiff_area(sq, shifted(sq, 0.5)) == pytest.approx(1.0, abs=1e-12)
    eps = 1e-3
    r = rectangle(1.0, eps)
    assert symdiff_area(r, shifted(r, 0.0, eps / 2)) == pytest.approx(eps, abs=1e-9)


def test_overlap_value_examples():
    sq = unit_square()
    assert overlap_value(sq, RigidMotion2(), sq) == pytest.approx(1.0)
    assert overlap_value(sq, RigidMotion2(0.0, (3.0, 0.0)), shifted(sq, 3.0)) == pytest.approx(1.0)
    c = unit_square(centered=True)
    assert overlap_value(c, RigidMotion2(math.pi / 4), c) == pytest.approx(OCTAGON, abs=1e-12)


def test_holes_and_multiple_components():
    d = square_with_hole(0.5)
    assert intersection_area(d, unit_square()) == pytest.approx(0.75)
    assert symdiff_area(d, unit_square()) == pytest.approx(0.25)
    two = boolean_ops.from_shapely(shapely.MultiPolygon([shapely.box(0, 0, 1, 1), shapely.box(2, 0, 3, 1)]))
    assert area(two) == pytest.approx(2.0)
    assert intersection_area(two, rectangle(3.0, 0.5)) == pytest.approx(1.0)


def test_clip_results_return_pieces():
    sq = unit_square()
    moved = shifted(sq, 0.5)
    assert intersection(sq, moved).area == pytest.approx(0.5)
    assert union(sq, moved).area == pytest.approx(1.5)
    assert difference(sq, moved).area == pytest.approx(0.5)
    sd = symmetric_difference(sq, moved)
    assert sd.area == pytest.approx(1.0)
    assert area(sd.pieces) == pytest.approx(1.0)
    assert len(sd.pieces.rings) == 2
    assert symmetric_difference(sq, sq).pieces is None
    assert intersection(sq, shifted(sq, 5.0)).pieces is None


def test_shapely_round_trip_keeps_orientation():
    d = square_with_hole()
    back = from_shapely(to_shapely(d))
    assert area(back) == pytest.approx(area(d))
    assert [r.orientation for r in back.rings] == ["outer", "hole"]
    assert back.rings[1].signed_area < 0


def test_checked_intersection_rejects_impossible_areas():
    with pytest.raises(RobustnessError):
        boolean_ops._checked_intersection(1.5, 1.0, 2.0)
    with pytest.raises(RobustnessError):
        boolean_ops._checked_intersection(-0.1, 1.0, 1.0)
    with pytest.raises(RobustnessError):
        boolean_ops._checked_intersection(float("nan"), 1.0, 1.0)
    assert boolean_ops._checked_intersection(1.0 + 1e-12, 1.0, 1.0) == 1.0


def test_overlay_failure_becomes_robustness_error(monkeypatch):
    def boom(a, b):
        raise shapely.errors.GEOSException("TopologyException: side location conflict")

    monkeypatch.setattr(boolean_ops.shapely, "intersection", boom)
    with pytest.raises(RobustnessError, match="overlay failed"):
        intersection_area(unit_square(), shifted(unit_square(), 0.5))


def test_near_coincident_edges_snap():
    # the moved copy's vertices are 1e-12 off the original's: results stay exact
    sq = unit_square()
    jitter = shifted(sq, 1e-12, -1e-12)
    assert intersection_area(sq, jitter) == pytest.approx(1.0, abs=1e-9)
    assert symdiff_area(sq, jitter) == pytest.approx(0.0, abs=1e-9)
    c = comb(20)
    assert symdiff_area(c, shifted(c, 1.0 / 40 + 1e-13)) == pytest.approx(1.0 + 0.1 / 20, abs=1e-9)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_convex_intersection_matches_clipping_oracle(seed):
    rng = np.random.default_rng(seed)
    a = random_convex_polygon(rng, scale=rng.uniform(0.5, 2.0))
    b = random_convex_polygon(rng, center=rng.uniform(-1, 1, size=2), scale=rng.uniform(0.5, 2.0))
    ha, hb = convex_hull(a), convex_hull(b)
    oracle = convex_intersection_area(ha.vertices, hb.vertices)
    assert intersection_area(a, b) == pytest.approx(oracle, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_nonconvex_against_convex_clip(seed):
    # a star polygon clipped by a convex window, oracle clips the star directly
    rng = np.random.default_rng(seed)
    a = random_star_polygon(rng, scale=1.0, center=(0.0, 0.0))
    w = random_convex_polygon(rng, center=rng.uniform(-0.5, 0.5, size=2))
    oracle = convex_intersection_area(a.vertices, convex_hull(w).vertices)
    assert intersection_area(a, w) == pytest.approx(oracle, abs=1e-9)


def test_monte_carlo_cross_check_for_holes():
    rng = np.random.default_rng(3)
    a = square_with_hole(0.5)
    b = apply_motion(l_shape(), RigidMotion2(0.3, (0.2, -0.1)))

    def inside(p):
        in_a = points_in_ring(p, a.rings[0].vertices) & ~points_in_ring(p, a.rings[1].vertices)
        return in_a & points_in_ring(p, b.rings[0].vertices)

    frac, box_area = monte_carlo_fraction(inside, (-0.5, -0.5, 1.5, 1.5), 400_000, rng)
    # 5 sigma of a binomial proportion
    sigma = box_area * math.sqrt(frac * (1 - frac) / 400_000)
    assert abs(frac * box_area - intersection_area(a, b)) <= 5 * sigma


@settings(max_examples=60, deadline=None)
@given(seeds, st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 2 * math.pi))
def test_measure_identities(seed, tx, ty, theta):
    rng = np.random.default_rng(seed)
    a = random_star_polygon(rng, scale=1.5, spread=3.0)
    b = apply_motion(random_star_polygon(rng, scale=1.5, spread=3.0), RigidMotion2(theta, (tx, ty)))
    i = intersection_area(a, b)
    assert -1e-12 <= i <= min(area(a), area(b)) + 1e-9
    assert intersection_area(b, a) == pytest.approx(i, abs=1e-9)
    assert symdiff_area(a, b) == pytest.approx(symdiff_area(b, a), abs=1e-9)
    assert union_area(a, b) == pytest.approx(area(a) + area(b) - i, abs=1e-9)
    assert symdiff_area(a, b) == pytest.approx(difference(a, b).area + difference(b, a).area, abs=1e-8)
    # symmetric difference is a metric: triangle inequality through a third shape
    c = random_star_polygon(rng, scale=1.5, spread=3.0)
    assert symdiff_area(a, b) <= symdiff_area(a, c) + symdiff_area(c, b) + 1e-8


def test_bbox_early_exit_is_exact_zero():
    assert intersection_area(unit_square(), shifted(unit_square(), 10.0)) == 0.0
    assert symdiff_area(unit_square(), shifted(unit_square(), 10.0)) == pytest.approx(2.0)
