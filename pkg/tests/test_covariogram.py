import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from overlapbounds.covariogram import (
    CovariogramSample,
    covariogram_grid,
    covariogram_value,
    cross_covariogram_value,
    directional_derivative,
    grid_axis,
    width_derivative_limit,
    samples_from_csv,
    samples_to_csv,
)
from overlapbounds.geometry import Point2, area, perimeter
from overlapbounds.grid_oracle import mask_intersection_area, rasterize
from overlapbounds.shapes import l_shape, random_convex_polygon, random_star_polygon, regular_polygon, unit_square

seeds = st.integers(0, 2**32 - 1)


def test_value_examples():
    a = l_shape()
    assert covariogram_value(a, (0, 0)) == pytest.approx(area(a))
    sq = unit_square()
    assert covariogram_value(sq, (0.25, 0)) == pytest.approx(0.75)
    assert covariogram_value(sq, (2, 0)) == 0.0


def test_square_closed_form():
    # g(t) = (1 - |tx|)(1 - |ty|) on [-1, 1]^2
    sq = unit_square()
    for tx, ty in [(0.1, 0.2), (-0.7, 0.3), (0.5, -0.5), (0.99, 0.01)]:
        assert covariogram_value(sq, (tx, ty)) == pytest.approx((1 - abs(tx)) * (1 - abs(ty)), abs=1e-12)


def test_cross_examples():
    a = l_shape()
    t = (0.2, -0.1)
    assert cross_covariogram_value(a, a, t) == pytest.approx(covariogram_value(a, t))
    sq = unit_square()
    assert cross_covariogram_value(sq, sq.translated((3, 0)), (3, 0)) == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(seeds, st.floats(-2, 2), st.floats(-2, 2))
def test_covariogram_properties(seed, tx, ty):
    a = random_star_polygon(np.random.default_rng(seed), scale=1.0, center=(0, 0))
    g = covariogram_value(a, (tx, ty))
    assert covariogram_value(a, (-tx, -ty)) == pytest.approx(g, abs=1e-9)
    assert 0 <= g <= area(a) + 1e-12
    # g = area - symdiff/2, and the symmetric difference is at most |t| per
    assert g >= area(a) - 0.5 * math.hypot(tx, ty) * perimeter(a) - 1e-9


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_cross_against_grid_oracle(seed):
    rng = np.random.default_rng(seed)
    a = random_star_polygon(rng, scale=1.0, spread=1.5)
    b = random_star_polygon(rng, scale=1.0, spread=1.5)
    t = rng.uniform(-1, 1, size=2)
    h = 1e-2
    est = mask_intersection_area(rasterize(a.translated(t), h), rasterize(b, h))
    assert abs(cross_covariogram_value(a, b, t) - est) <= 2 * h * (perimeter(a) + perimeter(b))


def test_convex_covariogram_decreases_along_rays():
    k = regular_polygon(7, 1.0)
    vals = [covariogram_value(k, (lam * 0.6, lam * 0.8)) for lam in np.linspace(0, 2.5, 26)]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
    assert vals[-1] == 0.0


def test_integral_equals_area_squared():
    # the covariogram integrates to area^2; midpoint rule on the support [-1, 1]^2
    sq = unit_square()
    n = 40
    axis = (np.arange(n) + 0.5) / n * 2 - 1
    total = sum(s.value for s in covariogram_grid(sq, axis, axis)) * (2 / n) ** 2
    assert total == pytest.approx(area(sq) ** 2, abs=1e-2)


# ---- derivative at the origin


def test_derivative_examples():
    sq = unit_square()
    assert directional_derivative(sq, (1, 0), 1e-4) == pytest.approx(-1.0, abs=1e-9)
    s = 1 / math.sqrt(2)
    assert directional_derivative(sq, (s, s), 1e-4) == pytest.approx(-math.sqrt(2), abs=2e-4)
    assert width_derivative_limit(sq, (s, s)) == pytest.approx(-math.sqrt(2))


@settings(max_examples=30, deadline=None)
@given(seeds, st.floats(0, 2 * math.pi))
def test_derivative_random_convex(seed, ang):
    k = random_convex_polygon(np.random.default_rng(seed))
    lam = 1e-4
    u = (math.cos(ang), math.sin(ang))
    q = directional_derivative(k, u, lam)
    assert abs(q - width_derivative_limit(k, u)) <= 10 * lam * perimeter(k)


def test_derivative_rejects_bad_input():
    sq = unit_square()
    with pytest.raises(ValueError, match="unit"):
        directional_derivative(sq, (1, 1), 1e-4)
    with pytest.raises(ValueError, match="positive"):
        directional_derivative(sq, (1, 0), 0.0)
    with pytest.raises(ValueError, match="convex"):
        directional_derivative(l_shape(), (1, 0), 1e-4)


# ---- grids and CSV


def test_grid_and_csv_round_trip():
    axis = grid_axis(1.0, 5)
    assert axis.tolist() == [-1.0, -0.5, 0.0, 0.5, 1.0]
    assert grid_axis(1.0, 1).tolist() == [0.0]
    samples = covariogram_grid(unit_square(), axis, axis)
    assert len(samples) == 25
    text = samples_to_csv(samples)
    assert text.splitlines()[0] == "tx,ty,value"
    back = samples_from_csv(text)
    assert back == samples
    centre = [s for s in back if s.t == Point2(0.0, 0.0)]
    assert centre == [CovariogramSample(Point2(0.0, 0.0), 1.0)]
    with pytest.raises(ValueError):
        samples_from_csv("a,b,c\n1,2,3\n")


def test_grid_rows_are_y_major():
    samples = covariogram_grid(unit_square(), [0.0, 0.5], [0.0, 0.25])
    assert [tuple(s.t) for s in samples] == [(0.0, 0.0), (0.5, 0.0), (0.0, 0.25), (0.5, 0.25)]
