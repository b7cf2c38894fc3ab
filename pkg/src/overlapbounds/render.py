"""Deterministic SVG drawings of a shape, a moved copy and their symmetric difference."""
from __future__ import annotations

import numpy as np

from .boolean_ops import symmetric_difference
from .geometry import PolygonShape, RigidMotion2, apply_motion, boundary_points

_STYLE = {
    "original": 'fill="none" stroke="#1f4e9c" stroke-width="1.5"',
    "moved": 'fill="none" stroke="#b3261e" stroke-width="1.5" stroke-dasharray="4 2"',
    "symdiff": 'fill="#9a9a9a" fill-opacity="0.6" stroke="none" fill-rule="evenodd"',
    "segment": 'stroke="#c8c8c8" stroke-width="0.75"',
}


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _path(shape: PolygonShape, to_px, css_class: str) -> str:
    parts = []
    for ring in shape.rings:
        pts = to_px(ring.vertices)
        parts.append("M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in pts) + " Z")
    return f'<path class="{css_class}" {_STYLE[css_class]} d="{" ".join(parts)}"/>'


def render_svg(
    shape: PolygonShape,
    motion: RigidMotion2 | None = None,
    segments: int = 0,
    size: int = 400,
    margin: int = 10,
) -> str:
    """SVG 1.1 text; ``segments`` chords ``ℓ(a, f(a))`` are drawn from evenly spaced boundary points."""
    moved = apply_motion(shape, motion) if motion is not None else None
    pts = shape.vertices if moved is None else np.vstack([shape.vertices, moved.vertices])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    scale = (size - 2 * margin) / span

    def to_px(p):
        p = np.asarray(p)
        return np.column_stack([margin + (p[:, 0] - lo[0]) * scale, size - margin - (p[:, 1] - lo[1]) * scale])

    body = []
    if moved is not None:
        pieces = symmetric_difference(shape, moved).pieces
        if pieces is not None:
            body.append(_path(pieces, to_px, "symdiff"))
        if segments > 0:
            a = boundary_points(shape, segments)
            fa = motion.apply(a)
            for (x0, y0), (x1, y1) in zip(to_px(a), to_px(fa)):
                body.append(
                    f'<line class="segment" {_STYLE["segment"]} x1="{_fmt(x0)}" y1="{_fmt(y0)}" '
                    f'x2="{_fmt(x1)}" y2="{_fmt(y1)}"/>'
                )
    body.append(_path(shape, to_px, "original"))
    if moved is not None:
        body.append(_path(moved, to_px, "moved"))
    header = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    )
    return "\n".join([header, *body, "</svg>"]) + "\n"
