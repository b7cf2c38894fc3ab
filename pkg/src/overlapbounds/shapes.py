"""Ready-made shapes and seeded random shape generators."""
from __future__ import annotations

import math

import numpy as np

from .geometry import PolygonShape


def rectangle(width: float, height: float, origin=(0.0, 0.0)) -> PolygonShape:
    x, y = origin
    return PolygonShape.from_rings(
        [[(x, y), (x + width, y), (x + width, y + height), (x, y + height)]]
    )


def centered_rectangle(width: float, height: float, center=(0.0, 0.0)) -> PolygonShape:
    return rectangle(width, height, (center[0] - width / 2, center[1] - height / 2))


def unit_square(centered: bool = False) -> PolygonShape:
    return centered_rectangle(1.0, 1.0) if centered else rectangle(1.0, 1.0)


def square_with_hole(hole: float = 0.5) -> PolygonShape:
    """Unit square with a centered square hole of side ``hole``."""
    lo, hi = 0.5 - hole / 2, 0.5 + hole / 2
    return PolygonShape.from_rings(
        [
            [(0, 0), (1, 0), (1, 1), (0, 1)],
            [(lo, lo), (lo, hi), (hi, hi), (hi, lo)],
        ]
    )


def regular_polygon(n: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0) -> PolygonShape:
    a = phase + 2 * np.pi * np.arange(n) / n
    pts = np.column_stack([center[0] + radius * np.cos(a), center[1] + radius * np.sin(a)])
    return PolygonShape.from_rings([pts])


def l_shape(size: float = 1.0, notch: float = 0.5) -> PolygonShape:
    """L-shaped hexagon: a size×size square with the top-right notch×notch corner removed."""
    s, c = size, size - notch
    return PolygonShape.from_rings([[(0, 0), (s, 0), (s, c), (c, c), (c, s), (0, s)]])


def comb(teeth: int, base_height: float = 0.1, tooth_height: float = 1.0) -> PolygonShape:
    """Comb of unit width: ``teeth`` teeth of width 1/(2k) separated by gaps of 1/(2k).

    The teeth stand on a strip ``[0, 1] x [0, base_height]``; the first tooth
    is flush with the left end, so the last gap ends at x = 1.
    """
    if teeth < 1:
        raise ValueError("comb needs at least one tooth")
    w = 1.0 / (2 * teeth)
    top = base_height + tooth_height
    pts = [(0.0, 0.0), (1.0, 0.0), (1.0, base_height)]
    for j in reversed(range(teeth)):
        x0 = 2 * j * w
        pts += [(x0 + w, base_height), (x0 + w, top), (x0, top)]
        if j > 0:
            pts.append((x0, base_height))
    return PolygonShape.from_rings([pts])


def random_star_polygon(
    rng: np.random.Generator,
    n: int | None = None,
    center=None,
    scale: float = 1.0,
    spread: float = 10.0,
) -> PolygonShape:
    """Simple polygon, star-shaped about its center, with 3 to 30 vertices.

    Angles are sorted and kept at least a fraction of the mean gap apart, so
    the ring never degenerates; radii vary in ``[0.3, 1] * scale``.
    """
    n = int(rng.integers(3, 31)) if n is None else n
    if center is None:
        center = rng.uniform(-spread + scale, spread - scale, size=2)
    gaps = rng.uniform(0.25, 1.0, size=n)
    angles = np.cumsum(gaps) / gaps.sum() * 2 * np.pi + rng.uniform(0, 2 * np.pi)
    if n == 3:
        radii = rng.uniform(0.6, 1.0, size=n) * scale
    else:
        radii = rng.uniform(0.3, 1.0, size=n) * scale
    pts = np.column_stack(
        [center[0] + radii * np.cos(angles), center[1] + radii * np.sin(angles)]
    )
    return PolygonShape.from_rings([pts])


def random_convex_polygon(
    rng: np.random.Generator, n: int | None = None, center=(0.0, 0.0), scale: float = 1.0
) -> PolygonShape:
    """Convex polygon: hull of points on an ellipse with random axes and tilt."""
    from .geometry import convex_hull

    n = int(rng.integers(3, 16)) if n is None else n
    while True:
        a = np.sort(rng.uniform(0, 2 * np.pi, size=n))
        ax, ay = rng.uniform(0.4, 1.0, size=2) * scale
        tilt = rng.uniform(0, math.pi)
        p = np.column_stack([ax * np.cos(a), ay * np.sin(a)])
        c, s = math.cos(tilt), math.sin(tilt)
        p = p @ np.array([[c, s], [-s, c]]) + np.asarray(center)
        hull = convex_hull(p)
        if hull.area > 0.05 * scale * scale:
            return hull.as_shape()
