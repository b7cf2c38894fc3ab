import json
import math

import numpy as np
import pytest
import shapely
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import sup_displacement_sampled
from overlapbounds import bounds
from overlapbounds.boolean_ops import overlap_value, symdiff_area
from overlapbounds.bounds import (
    BoundReport,
    cavalieri_report,
    cavalieri_sweep_area,
    displacement_sup,
    is_convex,
    lipschitz_report,
    overlap_lipschitz_bound,
    rigid_motion_symdiff_bound,
    rotation_constant,
    rotation_symdiff_bound,
    swept_hull_area,
    translation_symdiff_bound,
)
from overlapbounds.geometry import RigidMotion2, apply_motion, convex_hull, perimeter
from overlapbounds.grid_oracle import mask_symdiff_area, rasterize
from overlapbounds.shapes import (
    comb,
    l_shape,
    random_convex_polygon,
    random_star_polygon,
    rectangle,
    square_with_hole,
    unit_square,
)

seeds = st.integers(0, 2**32 - 1)
SQ_C = unit_square(centered=True)
W_PI_4 = 2 * math.sin(math.pi / 8) * math.sqrt(2) / 2
# 10^5 arclength samples on the square's boundary miss a corner by at most one step
SAMPLE_RES = 2 * math.sin(math.pi / 8) * 4 / 100_000


def star(seed, **kw):
    return random_star_polygon(np.random.default_rng(seed), **kw)


# ---- constants


def test_rotation_constant_values():
    assert rotation_constant(1).value == pytest.approx(1.0)
    assert rotation_constant(2).value == pytest.approx(math.sqrt(4 / 3), abs=1e-12)
    assert rotation_constant(2).value == pytest.approx(1.15470054, abs=1e-8)
    assert rotation_constant(3).value == pytest.approx(1.5)
    with pytest.raises(ValueError):
        rotation_constant(0)
    with pytest.raises(ValueError):
        rotation_constant(2.5)


def test_rotation_constant_increases_with_dimension():
    vals = [rotation_constant(d).value for d in range(1, 12)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


# ---- sweep area


def test_cavalieri_examples():
    k = convex_hull(unit_square())
    assert cavalieri_sweep_area(k, (2, 0)) == pytest.approx(3.0)
    assert cavalieri_sweep_area(k, (0, 0)) == pytest.approx(1.0)
    assert cavalieri_sweep_area(k, (1, 1)) == pytest.approx(3.0)
    # swept hexagon, measured as a union of the hull of both copies
    hexagon = shapely.convex_hull(shapely.union(shapely.box(0, 0, 1, 1), shapely.box(1, 1, 2, 2)))
    assert hexagon.area == pytest.approx(3.0)


@settings(max_examples=60, deadline=None)
@given(seeds, st.floats(-3, 3), st.floats(-3, 3))
def test_sweep_formula_matches_swept_hull(seed, tx, ty):
    k = convex_hull(random_convex_polygon(np.random.default_rng(seed)))
    assert cavalieri_sweep_area(k, (tx, ty)) == pytest.approx(swept_hull_area(k, (tx, ty)), rel=1e-9, abs=1e-12)
    # independent of scipy: the same hull through GEOS
    pts = np.vstack([k.vertices, k.vertices + [tx, ty]])
    assert swept_hull_area(k, (tx, ty)) == pytest.approx(shapely.MultiPoint(pts).convex_hull.area, rel=1e-9)


def test_cavalieri_report_needs_convex():
    with pytest.raises(ValueError):
        cavalieri_report(l_shape(), (0.1, 0))
    rep = cavalieri_report(unit_square(), (0.25, 0))
    assert rep.lhs == pytest.approx(0.5)
    assert rep.rhs == pytest.approx(0.5)
    assert rep.holds


@settings(max_examples=40, deadline=None)
@given(seeds, st.floats(-2, 2), st.floats(-2, 2))
def test_cavalieri_report_holds(seed, tx, ty):
    k = random_convex_polygon(np.random.default_rng(seed))
    assert cavalieri_report(k, (tx, ty)).holds


def test_is_convex():
    assert is_convex(unit_square())
    assert not is_convex(l_shape())
    assert not is_convex(square_with_hole())
    assert not is_convex(comb(3))


# ---- displacement


def test_displacement_examples():
    assert displacement_sup(l_shape(), 0.0) == 0.0
    assert displacement_sup(SQ_C, math.pi) == pytest.approx(math.sqrt(2))
    assert displacement_sup(SQ_C, math.pi / 4) == pytest.approx(0.54119610, abs=1e-8)
    sampled = sup_displacement_sampled(SQ_C, math.pi / 4, (0, 0))
    assert sampled <= displacement_sup(SQ_C, math.pi / 4) <= sampled + SAMPLE_RES


@settings(max_examples=30, deadline=None)
@given(seeds, st.floats(0, 2 * math.pi), st.floats(-3, 3), st.floats(-3, 3))
def test_displacement_dominates_boundary_samples(seed, theta, cx, cy):
    a = star(seed, spread=3.0, scale=1.0)
    sampled = sup_displacement_sampled(a, theta, (cx, cy), n=20_000)
    exact = displacement_sup(a, theta, (cx, cy))
    assert sampled <= exact + 1e-9
    # vertices are the maximizers, so dense sampling gets close from below
    assert sampled >= exact - 2 * abs(math.sin(theta / 2)) * perimeter(a) / 20_000 - 1e-9


# ---- translation


def test_translation_examples():
    rep = translation_symdiff_bound(unit_square(), (0.5, 0))
    assert (rep.lhs, rep.rhs) == pytest.approx((1.0, 2.0))
    eps = 1e-3
    r = rectangle(1.0, eps)
    rep = translation_symdiff_bound(r, (0, eps / 2))
    assert rep.lhs == pytest.approx(eps, abs=1e-9)
    assert rep.rhs == pytest.approx(eps * (1 + eps), abs=1e-15)
    zero = translation_symdiff_bound(l_shape(), (0, 0))
    assert (zero.lhs, zero.rhs) == (0.0, 0.0)


@settings(max_examples=100, deadline=None)
@given(seeds, st.floats(-5, 5), st.floats(-5, 5))
def test_translation_bound_holds(seed, tx, ty):
    rep = translation_symdiff_bound(star(seed), (tx, ty))
    assert rep.slack >= -1e-9 * rep.rhs


def test_translation_bound_on_shapes_with_holes():
    for t in [(0.1, 0), (0.25, 0.3), (2, 2)]:
        rep = translation_symdiff_bound(square_with_hole(0.5), t)
        assert rep.holds
        assert rep.lhs <= 2 * 1 * 0.75 + 1e-12


# ---- rotation


def test_rotation_examples():
    rep = rotation_symdiff_bound(SQ_C, math.pi / 2)
    assert rep.lhs == pytest.approx(0.0, abs=1e-12)
    assert rep.rhs == pytest.approx(4.0)
    rep = rotation_symdiff_bound(SQ_C, math.pi / 4)
    assert rep.lhs == pytest.approx(6 - 4 * math.sqrt(2), abs=1e-12)
    assert rep.rhs == pytest.approx(4 * W_PI_4, abs=1e-12)
    assert rep.rhs == pytest.approx(2.16478, abs=1e-5)
    gen = rotation_symdiff_bound(SQ_C, math.pi / 4, variant="general")
    assert gen.rhs == pytest.approx(rotation_constant(2).value * 4 * W_PI_4, abs=1e-12)
    assert gen.rhs == pytest.approx(2.49967, abs=1e-5)
    assert gen.bound_kind == "rotation_general"
    with pytest.raises(ValueError):
        rotation_symdiff_bound(SQ_C, 0.3, variant="bogus")


def test_rotation_lhs_against_grid_oracle():
    h = 1e-3
    rot = apply_motion(SQ_C, RigidMotion2(math.pi / 4))
    est = mask_symdiff_area(rasterize(SQ_C, h), rasterize(rot, h))
    assert est == pytest.approx(6 - 4 * math.sqrt(2), abs=2 * h * 8 + 8 * h * h)


@settings(max_examples=60, deadline=None)
@given(seeds, st.floats(0, 2 * math.pi), st.floats(-10, 10), st.floats(-10, 10))
def test_rotation_bound_holds(seed, theta, cx, cy):
    a = star(seed)
    for variant in ("rectifiable", "general"):
        rep = rotation_symdiff_bound(a, theta, (cx, cy), variant)
        assert rep.slack >= -1e-9 * rep.rhs


# ---- rigid


def test_rigid_examples():
    ident = rigid_motion_symdiff_bound(l_shape(), RigidMotion2())
    assert (ident.lhs, ident.rhs) == (0.0, 0.0)
    rep = rigid_motion_symdiff_bound(unit_square(), RigidMotion2(0.0, (0.5, 0)))
    assert (rep.lhs, rep.rhs) == pytest.approx((1.0, 2.0))
    rep = rigid_motion_symdiff_bound(SQ_C, RigidMotion2(math.pi / 4, (0.1, 0)))
    assert rep.lhs > 0 and rep.rhs > 0 and rep.slack >= 0
    h = 1e-3
    moved = apply_motion(SQ_C, RigidMotion2(math.pi / 4, (0.1, 0)))
    est = mask_symdiff_area(rasterize(SQ_C, h), rasterize(moved, h))
    assert est == pytest.approx(rep.lhs, abs=2 * h * 8 + 8 * h * h)


@settings(max_examples=60, deadline=None)
@given(seeds, st.floats(0, 2 * math.pi), st.floats(-5, 5), st.floats(-5, 5))
def test_rigid_bound_holds(seed, theta, tx, ty):
    rep = rigid_motion_symdiff_bound(star(seed), RigidMotion2(theta, (tx, ty)))
    assert rep.slack >= -1e-9 * rep.rhs


# ---- Lipschitz


def test_lipschitz_examples():
    r = RigidMotion2(0.4, (0.2, 0.1))
    assert overlap_lipschitz_bound(SQ_C, r, r) == 0.0
    assert overlap_lipschitz_bound(SQ_C, RigidMotion2(), RigidMotion2(0, (0.1, 0))) == pytest.approx(0.2)
    got = overlap_lipschitz_bound(SQ_C, RigidMotion2(), RigidMotion2(math.pi / 4))
    assert got == pytest.approx(0.5 * W_PI_4 * 4, abs=1e-12)
    assert got == pytest.approx(1.08239, abs=1e-5)
    w_sampled = sup_displacement_sampled(SQ_C, math.pi / 4, (0, 0))
    assert 0.5 * w_sampled * 4 <= got <= 0.5 * (w_sampled + SAMPLE_RES) * 4


@settings(max_examples=60, deadline=None)
@given(seeds, st.floats(0, 2 * math.pi), st.floats(-1, 1), st.floats(-1, 1), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
def test_lipschitz_bound_holds(seed, theta, tx, ty, dth, dx, dy):
    rng = np.random.default_rng(seed)
    a = random_star_polygon(rng, scale=1.0, center=(0.0, 0.0))
    b = random_star_polygon(rng, scale=1.0, center=(0.2, -0.1))
    r = RigidMotion2(theta, (tx, ty))
    s = RigidMotion2(theta + dth, (tx + dx, ty + dy))
    rep = lipschitz_report(a, b, r, s)
    assert rep.lhs <= rep.rhs + 1e-9
    assert rep.lhs == pytest.approx(abs(overlap_value(a, r, b) - overlap_value(a, s, b)))


def test_lipschitz_constant_dominates_translation_bound():
    # half the symmetric difference controls the overlap change
    a = comb(5)
    r, s = RigidMotion2(), RigidMotion2(0.0, (0.1, 0))
    assert 0.5 * symdiff_area(a, a.translated((0.1, 0))) <= overlap_lipschitz_bound(a, r, s) + 1e-12


# ---- reports


def test_report_round_trip_and_schema():
    rep = translation_symdiff_bound(l_shape(), (0.3, -0.2))
    d = json.loads(rep.to_json())
    assert sorted(d) == ["bound_kind", "inputs_digest", "lhs", "rhs", "slack"]
    assert BoundReport.from_dict(d) == rep
    with pytest.raises(ValueError):
        BoundReport.from_dict({**d, "extra": 1})
    with pytest.raises(ValueError):
        BoundReport.make(0, 1, "nonsense", "x")


def test_report_digest_is_stable_and_input_sensitive():
    a = translation_symdiff_bound(l_shape(), (0.3, -0.2))
    b = translation_symdiff_bound(l_shape(), (0.3, -0.2))
    c = translation_symdiff_bound(l_shape(), (0.3, -0.2000001))
    assert a.inputs_digest == b.inputs_digest != c.inputs_digest
    assert len(a.inputs_digest) == 16


def test_holds_uses_hybrid_tolerance():
    assert BoundReport.make(1.0 + 5e-10, 1.0, "translation", "x").holds
    assert not BoundReport.make(1.0 + 5e-9, 1.0, "translation", "x").holds
    assert BoundReport.make(1e6 * (1 + 5e-10), 1e6, "translation", "x").holds
    assert bounds.BoundReport.make(2.0, 1.0, "rigid", "x").ratio == 2.0
