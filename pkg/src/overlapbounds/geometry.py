"""Planar polygonal shapes, rigid motions and their elementary measurements.

A :class:`PolygonShape` is a bounded region described by oriented rings:
outer boundaries run counterclockwise, holes clockwise.  Vertices are kept
as read-only ``(n, 2)`` float arrays so that every downstream computation can
stay vectorized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.spatial import ConvexHull
from scipy.spatial import QhullError

EPS_SNAP = 1e-9
TWO_PI = 2.0 * math.pi

# edges per block in the pairwise contact scan; bounds peak memory at ~block*n
_CONTACT_BLOCK = 512


class ShapeError(ValueError):
    """Raised when a ring or shape violates its invariants.

    ``ring`` and ``vertex`` locate the offending element when known, which
    lets the file parser turn the error into a line/column diagnostic.
    """

    def __init__(self, message: str, ring: int | None = None, vertex: int | None = None):
        super().__init__(message)
        self.ring = ring
        self.vertex = vertex


class Point2(NamedTuple):
    x: float
    y: float


def as_point(p) -> Point2:
    x, y = (float(c) for c in p)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ShapeError(f"non-finite coordinate {p!r}")
    return Point2(x, y)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x[:-1], y[1:]) - np.dot(x[1:], y[:-1]) + x[-1] * y[0] - x[0] * y[-1])


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    if out.ndim != 2 or out.shape[1] != 2:
        raise ShapeError(f"expected an (n, 2) coordinate array, got shape {out.shape}")
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# contact tests

def _point_segment_dist(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    denom = np.einsum("...i,...i->...", ab, ab)
    t = np.einsum("...i,...i->...", p - a, ab) / np.where(denom > 0, denom, 1.0)
    t = np.clip(t, 0.0, 1.0)
    return np.linalg.norm(p - (a + t[..., None] * ab), axis=-1)


def _orient(a, b, c):
    return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])


def segment_distances(p1, p2, q1, q2) -> np.ndarray:
    """Elementwise distance between segments ``p1p2`` and ``q1q2`` (broadcasting)."""
    p1, p2, q1, q2 = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (p1, p2, q1, q2)))
    crossing = (_orient(q1, q2, p1) * _orient(q1, q2, p2) < 0) & (
        _orient(p1, p2, q1) * _orient(p1, p2, q2) < 0
    )
    dist = np.minimum.reduce(
        [
            _point_segment_dist(p1, q1, q2),
            _point_segment_dist(p2, q1, q2),
            _point_segment_dist(q1, p1, p2),
            _point_segment_dist(q2, p1, p2),
        ]
    )
    return np.where(crossing, 0.0, dist)


def _check_contacts(rings: Sequence[np.ndarray]) -> None:
    """Reject self-intersections, folds and any contact between distinct rings."""
    starts, ends, ring_id, edge_id, counts = [], [], [], [], []
    for k, v in enumerate(rings):
        n = len(v)
        starts.append(v)
        ends.append(np.roll(v, -1, axis=0))
        ring_id.append(np.full(n, k))
        edge_id.append(np.arange(n))
        counts.append(n)
    a = np.concatenate(starts)
    b = np.concatenate(ends)
    rid = np.concatenate(ring_id)
    eid = np.concatenate(edge_id)
    nring = np.array(counts)[rid]

    # folded-back consecutive edges (a spike of zero width)
    for k, v in enumerate(rings):
        e_in = v - np.roll(v, 1, axis=0)
        e_out = np.roll(v, -1, axis=0) - v
        cross = e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0]
        dot = np.einsum("ij,ij->i", e_in, e_out)
        scale = np.linalg.norm(e_in, axis=1) * np.linalg.norm(e_out, axis=1)
        bad = np.nonzero((np.abs(cross) <= EPS_SNAP * scale) & (dot < 0))[0]
        if len(bad):
            raise ShapeError("ring folds back on itself", ring=k, vertex=int(bad[0]))

    lo = np.minimum(a, b) - EPS_SNAP
    hi = np.maximum(a, b) + EPS_SNAP
    m = len(a)
    for s in range(0, m, _CONTACT_BLOCK):
        sl = slice(s, min(s + _CONTACT_BLOCK, m))
        # only test each unordered pair once: columns j > i
        cols = np.arange(s + 1, m)
        if len(cols) == 0:
            continue
        overlap = (
            (lo[sl, None, 0] <= hi[None, cols, 0])
            & (hi[sl, None, 0] >= lo[None, cols, 0])
            & (lo[sl, None, 1] <= hi[None, cols, 1])
            & (hi[sl, None, 1] >= lo[None, cols, 1])
        )
        rows = np.arange(sl.start, sl.stop)
        overlap &= cols[None, :] > rows[:, None]
        same = rid[rows, None] == rid[None, cols]
        diff = np.abs(eid[rows, None] - eid[None, cols])
        adjacent = same & ((diff == 1) | (diff == nring[rows, None] - 1))
        overlap &= ~adjacent
        ii, jj = np.nonzero(overlap)
        if len(ii) == 0:
            continue
        gi, gj = rows[ii], cols[jj]
        d = segment_distances(a[gi], b[gi], a[gj], b[gj])
        hit = np.nonzero(d <= EPS_SNAP)[0]
        if len(hit):
            i, j = gi[hit[0]], gj[hit[0]]
            if rid[i] == rid[j]:
                raise ShapeError("ring intersects itself", ring=int(rid[i]), vertex=int(eid[j]))
            raise ShapeError(
                f"ring {rid[j]} touches or crosses ring {rid[i]}",
                ring=int(rid[j]),
                vertex=int(eid[j]),
            )


def points_in_ring(points: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Even-odd membership of ``points`` (m, 2) in the ring ``vertices``."""
    px, py = points[:, 0][:, None], points[:, 1][:, None]
    x0, y0 = vertices[:, 0][None, :], vertices[:, 1][None, :]
    x1, y1 = np.roll(vertices[:, 0], -1)[None, :], np.roll(vertices[:, 1], -1)[None, :]
    straddle = (y0 > py) != (y1 > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xc = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
    return (np.count_nonzero(straddle & (px < xc), axis=1) % 2) == 1


# ---------------------------------------------------------------------------
# types

@dataclass(frozen=True, eq=False)
class Ring:
    vertices: np.ndarray
    orientation: str

    def __post_init__(self):
        object.__setattr__(self, "vertices", _frozen(self.vertices))
        if self.orientation not in ("outer", "hole"):
            raise ShapeError(f"unknown ring orientation {self.orientation!r}")

    @classmethod
    def from_points(cls, points) -> "Ring":
        """Build a ring, inferring its orientation from the signed area."""
        v = _frozen(points)
        # non-finite rings are rejected later by validate(); skip the area here
        a = signed_area(v) if len(v) >= 3 and np.isfinite(v).all() else 0.0
        return cls(v, "outer" if a > 0 else "hole")

    @property
    def signed_area(self) -> float:
        return signed_area(self.vertices)

    @property
    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    def validate(self, index: int = 0) -> None:
        v = self.vertices
        if len(v) < 3:
            raise ShapeError(f"ring needs at least 3 vertices, got {len(v)}", ring=index)
        if not np.all(np.isfinite(v)):
            bad = int(np.nonzero(~np.all(np.isfinite(v), axis=1))[0][0])
            raise ShapeError("non-finite coordinate", ring=index, vertex=bad)
        step = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
        dup = np.nonzero(step <= EPS_SNAP)[0]
        if len(dup):
            raise ShapeError("consecutive vertices coincide", ring=index, vertex=int((dup[0] + 1) % len(v)))
        a = self.signed_area
        if abs(a) <= EPS_SNAP * EPS_SNAP:
            raise ShapeError("ring has zero area", ring=index)
        if self.orientation == "outer" and a < 0:
            raise ShapeError("outer ring must be counterclockwise", ring=index)
        if self.orientation == "hole" and a > 0:
            raise ShapeError("hole ring must be clockwise", ring=index)


@dataclass(frozen=True, eq=False)
class PolygonShape:
    """A bounded polygonal region; holes are assigned to their enclosing outer ring."""

    rings: tuple[Ring, ...]
    parents: tuple[int, ...] = field(default=(), repr=False)

    @classmethod
    def from_rings(cls, rings: Iterable, validate: bool = True) -> "PolygonShape":
        built = tuple(r if isinstance(r, Ring) else Ring.from_points(r) for r in rings)
        if not validate:
            return cls(built, _nesting(built, check=False))
        return cls(built, validate_rings(built))

    @classmethod
    def _trusted(cls, rings: tuple[Ring, ...], parents: tuple[int, ...]) -> "PolygonShape":
        return cls(rings, parents)

    def __post_init__(self):
        if not self.parents:
            object.__setattr__(self, "parents", validate_rings(self.rings))

    def __len__(self) -> int:
        return len(self.rings)

    @property
    def vertices(self) -> np.ndarray:
        """All ring vertices stacked into one ``(n, 2)`` array."""
        return self.memo("vertices", lambda s: np.concatenate([r.vertices for r in s.rings]))

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        def box(s):
            v = s.vertices
            return float(v[:, 0].min()), float(v[:, 1].min()), float(v[:, 0].max()), float(v[:, 1].max())

        return self.memo("bounds", box)

    def memo(self, key: str, fn):
        """Per-instance cache for derived values; shapes are immutable so it never goes stale."""
        cache = self.__dict__.setdefault("_memo", {})
        if key not in cache:
            cache[key] = fn(self)
        return cache[key]

    @property
    def geom(self):
        """Cached shapely (Multi)Polygon of this shape."""
        from .boolean_ops import to_shapely

        return self.memo("geom", to_shapely)

    def as_lists(self) -> list[list[list[float]]]:
        return [r.vertices.tolist() for r in self.rings]

    def translated(self, t) -> "PolygonShape":
        return apply_motion(self, RigidMotion2(0.0, t))


def _nesting(rings: Sequence[Ring], check: bool = True) -> tuple[int, ...]:
    """Parent index per ring: -1 for outer rings, the enclosing outer for holes."""
    verts = [r.vertices for r in rings]
    parents = []
    for i, ring in enumerate(rings):
        containers = [
            j for j in range(len(rings)) if j != i and points_in_ring(verts[i][:1], verts[j])[0]
        ]
        if ring.orientation == "outer":
            if check and containers:
                raise ShapeError("outer ring is nested inside another ring", ring=i)
            parents.append(-1)
        else:
            outers = [j for j in containers if rings[j].orientation == "outer"]
            if check and (len(outers) != 1 or len(containers) != 1):
                raise ShapeError("hole must lie inside exactly one outer ring", ring=i)
            parents.append(outers[0] if outers else -1)
    return tuple(parents)


def validate_rings(rings: Sequence[Ring]) -> tuple[int, ...]:
    if not rings:
        raise ShapeError("shape has no rings")
    for k, r in enumerate(rings):
        r.validate(k)
    if not any(r.orientation == "outer" for r in rings):
        raise ShapeError("shape has no outer ring")
    _check_contacts([r.vertices for r in rings])
    parents = _nesting(rings)
    if sum(r.signed_area for r in rings) <= 0:
        raise ShapeError("shape has non-positive area")
    return parents


@dataclass(frozen=True)
class RigidMotion2:
    """The motion ``x -> R(theta) x + t``; rotation is about the origin."""

    theta: float = 0.0
    t: Point2 = Point2(0.0, 0.0)

    def __post_init__(self):
        theta = float(self.theta)
        if not math.isfinite(theta):
            raise ValueError("rotation angle must be finite")
        theta = math.fmod(theta, TWO_PI)
        if theta < 0:
            theta += TWO_PI
        if theta >= TWO_PI:
            theta = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "t", as_point(self.t))

    @classmethod
    def rotation_about(cls, theta: float, center) -> "RigidMotion2":
        c = np.asarray(as_point(center))
        return cls(theta, c - rotation_matrix(theta) @ c)

    @property
    def matrix(self) -> np.ndarray:
        return rotation_matrix(self.theta)

    def apply(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float)
        return p @ self.matrix.T + np.asarray(self.t)

    def as_tuple(self) -> tuple[float, float, float]:
        return self.theta, self.t.x, self.t.y


IDENTITY = RigidMotion2()


def compose(r: RigidMotion2, s: RigidMotion2) -> RigidMotion2:
    """``r ∘ s``: apply ``s`` first, then ``r``."""
    t = r.matrix @ np.asarray(s.t) + np.asarray(r.t)
    return RigidMotion2(r.theta + s.theta, t)


def invert(r: RigidMotion2) -> RigidMotion2:
    return RigidMotion2(-r.theta, -(rotation_matrix(-r.theta) @ np.asarray(r.t)))


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    vertices: np.ndarray

    def __post_init__(self):
        v = _frozen(self.vertices)
        object.__setattr__(self, "vertices", v)
        if len(v) < 3:
            raise ShapeError("convex polygon needs at least 3 vertices")
        e = np.roll(v, -1, axis=0) - v
        cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
        if np.any(cross < -EPS_SNAP):
            raise ShapeError("vertices are not in counterclockwise convex position")

    @property
    def area(self) -> float:
        return signed_area(self.vertices)

    def as_shape(self) -> PolygonShape:
        return PolygonShape.from_rings([self.vertices])


# ---------------------------------------------------------------------------
# measurements

def _area(shape: PolygonShape) -> float:
    return max(0.0, sum(r.signed_area for r in shape.rings))


def _perimeter(shape: PolygonShape) -> float:
    total = 0.0
    for r in shape.rings:
        a, b = r.edges
        total += float(np.linalg.norm(b - a, axis=1).sum())
    return total


def area(shape: PolygonShape) -> float:
    return shape.memo("area", _area)


def perimeter(shape: PolygonShape) -> float:
    return shape.memo("perimeter", _perimeter)


def centroid(shape: PolygonShape) -> Point2:
    cx = cy = 0.0
    for r in shape.rings:
        v = r.vertices
        w = np.roll(v, -1, axis=0)
        cr = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
        cx += float(np.dot(v[:, 0] + w[:, 0], cr))
        cy += float(np.dot(v[:, 1] + w[:, 1], cr))
    a = area(shape)
    return Point2(cx / (6 * a), cy / (6 * a))


def apply_motion(shape: PolygonShape, r: RigidMotion2) -> PolygonShape:
    rings = tuple(Ring(r.apply(ring.vertices), ring.orientation) for ring in shape.rings)
    return PolygonShape._trusted(rings, shape.parents)


def projection_extent(k: ConvexPolygon, direction) -> float:
    """Length of the projection of ``k`` onto the line orthogonal to ``direction``."""
    d = np.asarray(direction, dtype=float)
    norm = float(np.hypot(*d))
    if norm == 0.0:
        raise ValueError("projection direction must be nonzero")
    normal = np.array([-d[1], d[0]]) / norm
    proj = k.vertices @ normal
    return float(proj.max() - proj.min())


def convex_hull(shape: PolygonShape | np.ndarray) -> ConvexPolygon:
    pts = shape.vertices if isinstance(shape, PolygonShape) else np.asarray(shape, dtype=float)
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise ShapeError(f"degenerate point set has no 2D hull: {exc.args[0].splitlines()[0]}") from None
    v = pts[hull.vertices]
    # qhull may keep vertices that are only extreme up to rounding
    keep = np.ones(len(v), dtype=bool)
    changed = True
    while changed and keep.sum() > 3:
        changed = False
        w = v[keep]
        prev, nxt = np.roll(w, 1, axis=0), np.roll(w, -1, axis=0)
        cross = (w[:, 0] - prev[:, 0]) * (nxt[:, 1] - prev[:, 1]) - (w[:, 1] - prev[:, 1]) * (
            nxt[:, 0] - prev[:, 0]
        )
        flat = np.nonzero(np.abs(cross) <= EPS_SNAP * np.linalg.norm(nxt - prev, axis=1))[0]
        if len(flat):
            keep[np.nonzero(keep)[0][flat[0]]] = False
            changed = True
    return ConvexPolygon(v[keep])


def max_radius(shape: PolygonShape, center=(0.0, 0.0)) -> float:
    c = np.asarray(as_point(center))
    return float(np.linalg.norm(shape.vertices - c, axis=1).max())


def diameter(shape: PolygonShape) -> float:
    v = convex_hull(shape).vertices
    d = v[:, None, :] - v[None, :, :]
    return float(np.sqrt((d**2).sum(-1)).max())


def boundary_samples(shape: PolygonShape, step: float) -> np.ndarray:
    """Points along every ring at arclength spacing at most ``step`` (vertices included)."""
    out = []
    for r in shape.rings:
        a, b = r.edges
        lengths = np.linalg.norm(b - a, axis=1)
        for p, q, length in zip(a, b, lengths):
            n = max(1, int(math.ceil(length / step)))
            s = np.arange(n) / n
            out.append(p + s[:, None] * (q - p))
    return np.concatenate(out)


def boundary_points(shape: PolygonShape, n: int) -> np.ndarray:
    """``n`` points spread evenly by arclength over the whole boundary."""
    starts, ends = [], []
    for r in shape.rings:
        a, b = r.edges
        starts.append(a)
        ends.append(b)
    a, b = np.concatenate(starts), np.concatenate(ends)
    lengths = np.linalg.norm(b - a, axis=1)
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    s = (np.arange(n) + 0.5) / n * cum[-1]
    k = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(a) - 1)
    frac = ((s - cum[k]) / lengths[k])[:, None]
    return a[k] + frac * (b[k] - a[k])
