"""Covariogram ``g_A(t) = area((A + t) ∩ A)`` and its cross variant."""
from __future__ import annotations

import csv
import io
import math
from typing import NamedTuple

import numpy as np

from .boolean_ops import intersection_area
from .bounds import is_convex
from .geometry import Point2, PolygonShape, as_point, convex_hull, projection_extent


class CovariogramSample(NamedTuple):
    t: Point2
    value: float


def covariogram_value(shape: PolygonShape, t) -> float:
    return intersection_area(shape.translated(t), shape)


def cross_covariogram_value(shape_a: PolygonShape, shape_b: PolygonShape, t) -> float:
    """``g_{B,A}(t) = area((A + t) ∩ B)``."""
    return intersection_area(shape_a.translated(t), shape_b)


def directional_derivative(shape: PolygonShape, u, lam: float) -> float:
    """Forward difference ``(g(λu) - g(0)) / λ`` of the covariogram along unit ``u``.

    One-sided on purpose: the limit is the one-sided derivative at 0, which
    for a convex body is minus its width across ``u``.
    """
    u = as_point(u)
    if abs(math.hypot(*u) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    if not lam > 0:
        raise ValueError("step must be positive")
    if not is_convex(shape):
        raise ValueError("directional derivative identity needs a convex shape")
    g0 = covariogram_value(shape, (0.0, 0.0))
    return (covariogram_value(shape, (lam * u.x, lam * u.y)) - g0) / lam


def width_derivative_limit(shape: PolygonShape, u) -> float:
    """``-width(A across u)``, the value the forward difference converges to."""
    return -projection_extent(convex_hull(shape), u)


def covariogram_grid(
    shape: PolygonShape, xs, ys, other: PolygonShape | None = None
) -> list[CovariogramSample]:
    """Samples on the grid ``xs × ys``; cross covariogram against ``other`` when given."""
    target = shape if other is None else other
    out = []
    for ty in ys:
        for tx in xs:
            t = Point2(float(tx), float(ty))
            out.append(CovariogramSample(t, cross_covariogram_value(shape, target, t)))
    return out


def samples_to_csv(samples) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tx", "ty", "value"])
    for s in samples:
        w.writerow([repr(s.t.x), repr(s.t.y), repr(s.value)])
    return buf.getvalue()


def samples_from_csv(text: str) -> list[CovariogramSample]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["tx", "ty", "value"]:
        raise ValueError("covariogram CSV must start with the header tx,ty,value")
    return [CovariogramSample(Point2(float(a), float(b)), float(c)) for a, b, c in rows[1:]]


def grid_axis(extent: float, n: int) -> np.ndarray:
    return np.linspace(-extent, extent, n) if n > 1 else np.zeros(1)
