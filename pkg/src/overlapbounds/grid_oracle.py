"""Raster measure oracle, independent of the polygon overlay.

Masks live on one global lattice per cell size ``h``: cell ``(i, j)`` covers
``[i h, (i+1) h] x [j h, (j+1) h]`` and is set when its center is inside the
shape.  Because the lattice is anchored at the origin, masks rasterized
separately line up cell for cell and can be combined with plain boolean ops.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import shapely

from .boolean_ops import symdiff_area
from .geometry import (
    EPS_SNAP,
    Point2,
    PolygonShape,
    RigidMotion2,
    apply_motion,
    as_point,
    boundary_samples,
    convex_hull,
    perimeter,
    projection_extent,
)
from .shapes import comb

MAX_CELLS = 10**8
_ROW_BLOCK = 256


class LatticeError(ValueError):
    """Masks do not share a cell size and lattice."""


class ResourceError(MemoryError):
    """A mask would exceed :data:`MAX_CELLS`."""


@dataclass(frozen=True, eq=False)
class GridMask:
    """Occupancy of the ``width x height`` cells starting at lattice index ``(i0, j0)``.

    ``cells[j, i]`` is row ``j`` from the bottom.
    """

    i0: int
    j0: int
    h: float
    cells: np.ndarray

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("cell size must be positive")
        c = np.array(self.cells, dtype=bool)
        c.setflags(write=False)
        object.__setattr__(self, "cells", c)

    @property
    def origin(self) -> Point2:
        return Point2(self.i0 * self.h, self.j0 * self.h)

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.cells))

    @property
    def area(self) -> float:
        return self.count * self.h * self.h

    def centers(self) -> np.ndarray:
        """Centers of the set cells, ``(m, 2)``."""
        j, i = np.nonzero(self.cells)
        return np.column_stack([(self.i0 + i + 0.5) * self.h, (self.j0 + j + 0.5) * self.h])

    @classmethod
    def from_origin(cls, origin, h: float, cells) -> "GridMask":
        """Wrap a bitmap whose lower-left corner sits at ``origin`` (a lattice point)."""
        o = as_point(origin)
        i0, j0 = round(o.x / h), round(o.y / h)
        if abs(o.x - i0 * h) > 1e-12 or abs(o.y - j0 * h) > 1e-12:
            raise LatticeError(f"origin {tuple(o)} is not on the lattice of cell size {h}")
        return cls(i0, j0, h, cells)


def rasterize(shape: PolygonShape, h: float) -> GridMask:
    """Even-odd scanline fill at cell size ``h``; centers within EPS_SNAP of an edge count as inside."""
    if not h > 0:
        raise ValueError("cell size must be positive")
    xmin, ymin, xmax, ymax = shape.bounds
    i0, j0 = math.floor(xmin / h), math.floor(ymin / h)
    width = max(1, math.ceil(xmax / h) - i0)
    height = max(1, math.ceil(ymax / h) - j0)
    if width * height > MAX_CELLS:
        raise ResourceError(f"mask of {width}x{height} cells exceeds {MAX_CELLS}")

    x0 = np.concatenate([r.vertices[:, 0] for r in shape.rings])
    y0 = np.concatenate([r.vertices[:, 1] for r in shape.rings])
    x1 = np.concatenate([np.roll(r.vertices[:, 0], -1) for r in shape.rings])
    y1 = np.concatenate([np.roll(r.vertices[:, 1], -1) for r in shape.rings])
    yc_all = (j0 + np.arange(height) + 0.5) * h
    cells = np.zeros((height, width), dtype=bool)
    for s in range(0, height, _ROW_BLOCK):
        yc = yc_all[s : s + _ROW_BLOCK, None]
        straddle = (y0 > yc) != (y1 > yc)
        rows, edges = np.nonzero(straddle)
        if len(rows) == 0:
            continue
        ys = yc[rows, 0]
        xs = x0[edges] + (ys - y0[edges]) * (x1[edges] - x0[edges]) / (y1[edges] - y0[edges])
        order = np.lexsort((xs, rows))
        rows, xs = rows[order], xs[order]
        first = np.searchsorted(rows, rows, side="left")
        rank = np.arange(len(rows)) - first
        xs = np.where(rank % 2 == 0, xs - EPS_SNAP, xs + EPS_SNAP)
        idx = np.clip(np.floor(xs / h - 0.5).astype(np.int64) + 1 - i0, 0, width)
        diff = np.zeros((yc.shape[0], width + 1), dtype=np.int32)
        np.add.at(diff, (rows, idx), 1)
        cells[s : s + yc.shape[0]] = (np.cumsum(diff, axis=1)[:, :width] % 2) == 1
    return GridMask(i0, j0, h, cells)


def _check_lattice(a: GridMask, b: GridMask) -> None:
    if abs(a.h - b.h) > 1e-12 * max(a.h, b.h):
        raise LatticeError(f"cell sizes differ: {a.h} vs {b.h}")


def aligned(a: GridMask, b: GridMask) -> tuple[np.ndarray, np.ndarray, int, int]:
    """Both bitmaps padded to their common extent, plus that extent's lattice offset."""
    _check_lattice(a, b)
    i0, j0 = min(a.i0, b.i0), min(a.j0, b.j0)
    i1 = max(a.i0 + a.width, b.i0 + b.width)
    j1 = max(a.j0 + a.height, b.j0 + b.height)
    out = []
    for m in (a, b):
        c = np.zeros((j1 - j0, i1 - i0), dtype=bool)
        c[m.j0 - j0 : m.j0 - j0 + m.height, m.i0 - i0 : m.i0 - i0 + m.width] = m.cells
        out.append(c)
    return out[0], out[1], i0, j0


def combine(a: GridMask, b: GridMask, op) -> GridMask:
    ca, cb, i0, j0 = aligned(a, b)
    return GridMask(i0, j0, a.h, op(ca, cb))


def mask_intersection_area(a: GridMask, b: GridMask) -> float:
    return combine(a, b, np.logical_and).area


def mask_difference_area(a: GridMask, b: GridMask) -> float:
    return combine(a, b, lambda x, y: x & ~y).area


def mask_symdiff_area(a: GridMask, b: GridMask) -> float:
    return combine(a, b, np.logical_xor).area


def rasterization_error_bound(shape: PolygonShape, h: float) -> float:
    return 2 * h * perimeter(shape) + 4 * h * h


# ---------------------------------------------------------------------------
# PGM P5 interchange

def to_pgm(mask: GridMask) -> bytes:
    """Binary PGM, one byte per cell, 255 = set; the top image row is the highest y."""
    img = np.where(mask.cells[::-1], 255, 0).astype(np.uint8)
    header = f"P5\n{mask.width} {mask.height}\n255\n".encode("ascii")
    return header + img.tobytes()


def _pgm_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    tokens, pos = [], 2
    while len(tokens) < count:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(int(data[start:pos]))
    return tokens, pos + 1


def from_pgm(data: bytes, h: float, origin=(0.0, 0.0), threshold: int = 128) -> GridMask:
    """Read a P5 bitmap as a mask; pixels ``>= threshold`` are set."""
    if data[:2] != b"P5":
        raise ValueError("not a binary PGM (P5) file")
    (w, hgt, maxval), pos = _pgm_tokens(data, 3)
    bpp = 1 if maxval < 256 else 2
    raw = np.frombuffer(data[pos : pos + w * hgt * bpp], dtype=np.uint8 if bpp == 1 else ">u2")
    if raw.size != w * hgt:
        raise ValueError("truncated PGM raster")
    img = raw.reshape(hgt, w)
    scaled = img.astype(np.float64) * (255.0 / maxval)
    return GridMask.from_origin(origin, h, (scaled >= threshold)[::-1])


# ---------------------------------------------------------------------------
# experiments


@dataclass(frozen=True)
class CombReport:
    teeth: int
    t: Point2
    symdiff: float
    projection_term: float
    translation_rhs: float
    perimeter: float

    def to_dict(self) -> dict:
        return {
            "teeth": self.teeth,
            "t": list(self.t),
            "symdiff": self.symdiff,
            "projection_term": self.projection_term,
            "translation_rhs": self.translation_rhs,
            "perimeter": self.perimeter,
        }


def comb_demo(k: int) -> CombReport:
    """Translate a k-tooth comb by one tooth width, so every tooth lands on a gap."""
    e = comb(k)
    t = Point2(1.0 / (2 * k), 0.0)
    per = perimeter(e)
    return CombReport(
        teeth=k,
        t=t,
        symdiff=symdiff_area(e, e.translated(t)),
        projection_term=t.x * projection_extent(convex_hull(e), t),
        translation_rhs=t.x * per,
        perimeter=per,
    )


def _lattice_points_inside(geom, h: float, band: float) -> np.ndarray:
    """Lattice cell centers inside ``geom`` at distance more than ``band`` from its boundary."""
    xmin, ymin, xmax, ymax = geom.bounds
    xs = (np.arange(math.floor(xmin / h), math.ceil(xmax / h)) + 0.5) * h
    ys = (np.arange(math.floor(ymin / h), math.ceil(ymax / h)) + 0.5) * h
    X, Y = np.meshgrid(xs, ys)
    X, Y = X.ravel(), Y.ravel()
    shapely.prepare(geom)
    inside = shapely.contains_xy(geom, X, Y)
    pts = np.column_stack([X[inside], Y[inside]])
    if len(pts) == 0:
        return pts
    d = shapely.distance(shapely.points(pts), geom.boundary)
    return pts[d > band]


def _split(points: np.ndarray, workers: int) -> list[np.ndarray]:
    if workers <= 1 or len(points) < 2 * workers:
        return [points]
    return np.array_split(points, workers)


def _run_chunks(fn, points: np.ndarray, workers: int) -> int:
    chunks = _split(points, workers)
    if len(chunks) == 1:
        return fn(chunks[0])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(fn, chunks))


def covering_check_translation(shape: PolygonShape, t, h: float, workers: int = 1) -> int:
    """Count lattice points of ``A △ (A+t)`` not within ``h√2`` of some segment ``ℓ(a, a+t)``.

    For each point x the parameter λ in [0, 1] is marched from 0.  The map
    λ -> dist(x - λt, ∂A) is |t|-Lipschitz, so a step of (dist - band)/|t|
    cannot jump over a hit; steps never drop below h/(2|t|).
    """
    if not h > 0:
        raise ValueError("cell size must be positive")
    t = np.asarray(as_point(t))
    length = float(np.hypot(*t))
    if length == 0.0:
        return 0
    band = h * math.sqrt(2.0)
    g = shapely.symmetric_difference(shape.geom, shape.translated(t).geom)
    if g.is_empty:
        return 0
    pts = _lattice_points_inside(g, h, band)
    boundary = shape.geom.boundary
    shapely.prepare(boundary)
    min_step = h / (2 * length)

    def check(x: np.ndarray) -> int:
        lam = np.zeros(len(x))
        active = np.arange(len(x))
        failures = 0
        while len(active):
            lam_a = np.minimum(lam[active], 1.0)
            d = shapely.distance(shapely.points(x[active] - lam_a[:, None] * t), boundary)
            hit = d <= band
            at_end = lam_a >= 1.0
            failures += int(np.count_nonzero(~hit & at_end))
            keep = ~hit & ~at_end
            active = active[keep]
            lam[active] = lam_a[keep] + np.maximum((d[keep] - band) / length, min_step)
        return failures

    return _run_chunks(check, pts, workers)


def covering_check_rotation(
    shape: PolygonShape, theta: float, h: float, center=(0.0, 0.0), workers: int = 1
) -> int:
    """Count lattice points of ``A △ MA`` not within ``h√2`` of some segment ``ℓ(a, Ma)``.

    Boundary points ``a`` are sampled every h/2 of arclength; moving ``a``
    moves every point of ``ℓ(a, Ma)`` by at most as much, so the sampled
    segments stay within h/4 of the continuous family.
    """
    if not h > 0:
        raise ValueError("cell size must be positive")
    band = h * math.sqrt(2.0)
    motion = RigidMotion2.rotation_about(theta, center)
    g = shapely.symmetric_difference(shape.geom, apply_motion(shape, motion).geom)
    if g.is_empty or g.area == 0.0:
        return 0
    pts = _lattice_points_inside(g, h, band)
    if len(pts) == 0:
        return 0
    a = boundary_samples(shape, h / 2)
    ma = motion.apply(a)
    moved = np.linalg.norm(ma - a, axis=1) > 0
    segs = np.concatenate(
        [
            shapely.linestrings(np.stack([a[moved], ma[moved]], axis=1)),
            shapely.points(a[~moved]),
        ]
    )
    tree = shapely.STRtree(segs)

    def check(x: np.ndarray) -> int:
        hits = tree.query(shapely.points(x), predicate="dwithin", distance=band)
        return len(x) - len(np.unique(hits[0]))

    return _run_chunks(check, pts, workers)


@dataclass(frozen=True)
class PropositionReport:
    """Overlap-difference check for three equal-lattice masks D, G, E."""

    lhs: float
    difference_bound: float
    half_symdiff_bound: float
    tolerance: float

    @property
    def holds_difference(self) -> bool:
        return self.lhs <= self.difference_bound + self.tolerance

    @property
    def holds_half_symdiff(self) -> bool:
        return self.lhs <= self.half_symdiff_bound + self.tolerance

    @property
    def holds(self) -> bool:
        return self.holds_difference and self.holds_half_symdiff


def overlap_difference_check(d_mask: GridMask, g_mask: GridMask, e_mask: GridMask) -> PropositionReport:
    """``|μ(D∩E) − μ(G∩E)|`` against ``μ(D \\ G)`` and ``½ μ(D △ G)`` for ``μ(D) = μ(G)``."""
    _check_lattice(d_mask, g_mask)
    _check_lattice(d_mask, e_mask)
    cell = d_mask.h * d_mask.h
    if abs(d_mask.area - g_mask.area) > cell * (1 + 1e-9):
        raise ValueError(f"D and G must have equal measure, got {d_mask.area} and {g_mask.area}")
    lhs = abs(mask_intersection_area(d_mask, e_mask) - mask_intersection_area(g_mask, e_mask))
    return PropositionReport(
        lhs=lhs,
        difference_bound=mask_difference_area(d_mask, g_mask),
        half_symdiff_bound=0.5 * mask_symdiff_area(d_mask, g_mask),
        tolerance=cell,
    )
