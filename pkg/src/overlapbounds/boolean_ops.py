"""Intersection, union and symmetric-difference areas of polygon shapes.

The overlay itself is delegated to GEOS through shapely.  Inputs are snapped
against each other first so that shared vertices and edges (the ``a == b``
and adjacent-tile cases) overlay cleanly, and every result is checked
against the trivial containment bounds before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import shapely
from scipy.spatial import cKDTree
from shapely.errors import GEOSException
from shapely.geometry import MultiPolygon, Polygon

from .geometry import (
    EPS_SNAP,
    PolygonShape,
    Ring,
    RigidMotion2,
    apply_motion,
    area,
)


class RobustnessError(RuntimeError):
    """The overlay failed or produced an area outside its provable range."""


@dataclass(frozen=True, eq=False)
class ClipResult:
    pieces: PolygonShape | None
    area: float


def to_shapely(shape: PolygonShape):
    polys = []
    for i, ring in enumerate(shape.rings):
        if ring.orientation != "outer":
            continue
        holes = [r.vertices for r, p in zip(shape.rings, shape.parents) if p == i]
        polys.append(Polygon(ring.vertices, holes))
    return polys[0] if len(polys) == 1 else MultiPolygon(polys)


def _polygons(geom) -> list[Polygon]:
    if isinstance(geom, Polygon):
        return [geom] if geom.area > 0 else []
    return [p for part in getattr(geom, "geoms", []) for p in _polygons(part)]


def from_shapely(geom) -> PolygonShape | None:
    """Convert a polygonal GEOS result back into a shape; ``None`` when empty."""
    polys = _polygons(geom if geom.is_valid else shapely.make_valid(geom))
    rings, parents = [], []
    for poly in polys:
        poly = shapely.geometry.polygon.orient(poly, 1.0)
        outer = len(rings)
        rings.append(Ring(np.asarray(poly.exterior.coords)[:-1], "outer"))
        parents.append(-1)
        for interior in poly.interiors:
            rings.append(Ring(np.asarray(interior.coords)[:-1], "hole"))
            parents.append(outer)
    if not rings:
        return None
    return PolygonShape._trusted(tuple(rings), tuple(parents))


def _snap_geoms(a: PolygonShape, b: PolygonShape):
    """Shapely geometries of ``a`` and ``b`` with a's near-coincident vertices moved onto b's."""
    va, vb = a.vertices, b.vertices
    dist, idx = b.memo("kdtree", lambda s: cKDTree(s.vertices)).query(va, distance_upper_bound=EPS_SNAP)
    close = np.isfinite(dist) & (dist > 0)
    if not close.any():
        return a.geom, b.geom
    snapped = []
    offset = 0
    for ring in a.rings:
        n = len(ring.vertices)
        v = ring.vertices.copy()
        sel = close[offset : offset + n]
        v[sel] = vb[idx[offset : offset + n][sel]]
        snapped.append(Ring(v, ring.orientation))
        offset += n
    return to_shapely(PolygonShape._trusted(tuple(snapped), a.parents)), b.geom


def _same_geometry(a: PolygonShape, b: PolygonShape) -> bool:
    if a is b:
        return True
    if len(a.rings) != len(b.rings):
        return False
    for ra, rb in zip(a.rings, b.rings):
        if ra.vertices.shape != rb.vertices.shape:
            return False
        if not np.all(np.abs(ra.vertices - rb.vertices) <= EPS_SNAP):
            return False
    return True


def _overlay(op, ga, gb):
    try:
        return op(ga, gb)
    except GEOSException as exc:
        raise RobustnessError(f"polygon overlay failed: {exc}") from exc


def _checked_intersection(value: float, area_a: float, area_b: float) -> float:
    tol = 1e-9 * max(1.0, area_a, area_b)
    if not np.isfinite(value) or value < -tol or value > min(area_a, area_b) + tol:
        raise RobustnessError(
            f"overlay area {value!r} outside [0, {min(area_a, area_b)!r}]"
        )
    return min(max(value, 0.0), min(area_a, area_b))


def intersection_area(a: PolygonShape, b: PolygonShape) -> float:
    area_a, area_b = area(a), area(b)
    if _same_geometry(a, b):
        return min(area_a, area_b)
    ax0, ay0, ax1, ay1 = a.bounds
    bx0, by0, bx1, by1 = b.bounds
    if ax0 > bx1 or bx0 > ax1 or ay0 > by1 or by0 > ay1:
        return 0.0
    ga, gb = _snap_geoms(a, b)
    return _checked_intersection(_overlay(shapely.intersection, ga, gb).area, area_a, area_b)


def symdiff_area(a: PolygonShape, b: PolygonShape) -> float:
    if _same_geometry(a, b):
        return 0.0
    return max(0.0, area(a) + area(b) - 2.0 * intersection_area(a, b))


def union_area(a: PolygonShape, b: PolygonShape) -> float:
    return area(a) + area(b) - intersection_area(a, b)


def overlap_value(a: PolygonShape, r: RigidMotion2, b: PolygonShape) -> float:
    """Area of ``r(a) ∩ b``, the shape-matching objective."""
    return intersection_area(apply_motion(a, r), b)


def intersection(a: PolygonShape, b: PolygonShape) -> ClipResult:
    ga, gb = _snap_geoms(a, b)
    g = _overlay(shapely.intersection, ga, gb)
    return ClipResult(from_shapely(g), _checked_intersection(g.area, area(a), area(b)))


def union(a: PolygonShape, b: PolygonShape) -> ClipResult:
    ga, gb = _snap_geoms(a, b)
    g = _overlay(shapely.union, ga, gb)
    return ClipResult(from_shapely(g), float(g.area))


def difference(a: PolygonShape, b: PolygonShape) -> ClipResult:
    ga, gb = _snap_geoms(a, b)
    g = _overlay(shapely.difference, ga, gb)
    return ClipResult(from_shapely(g), max(0.0, float(g.area)))


def symmetric_difference(a: PolygonShape, b: PolygonShape) -> ClipResult:
    """Pieces of ``a △ b``; the area follows the inclusion-exclusion route of :func:`symdiff_area`."""
    if _same_geometry(a, b):
        return ClipResult(None, 0.0)
    ga, gb = _snap_geoms(a, b)
    g = _overlay(shapely.symmetric_difference, ga, gb)
    return ClipResult(from_shapely(g), symdiff_area(a, b))
