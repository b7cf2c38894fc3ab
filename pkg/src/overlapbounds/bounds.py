"""Closed-form symmetric-difference bounds paired with exactly measured areas.

Each ``*_symdiff_bound`` function returns a :class:`BoundReport` holding the
measured left side (a clipping area), the bound, and the slack between them.
A negative slack beyond :data:`SLACK_TOL` means an inequality that ought to
hold did not, which is always a bug somewhere in the measurement chain.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .boolean_ops import overlap_value, symdiff_area
from .geometry import (
    ConvexPolygon,
    PolygonShape,
    RigidMotion2,
    apply_motion,
    area,
    as_point,
    convex_hull,
    max_radius,
    perimeter,
    projection_extent,
)

SLACK_TOL = 1e-9

BOUND_KINDS = (
    "translation",
    "rotation_general",
    "rotation_rectifiable",
    "rigid",
    "lipschitz",
    "cavalieri",
)


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    slack: float
    bound_kind: str
    inputs_digest: str

    @classmethod
    def make(cls, lhs: float, rhs: float, kind: str, digest: str) -> "BoundReport":
        if kind not in BOUND_KINDS:
            raise ValueError(f"unknown bound kind {kind!r}")
        return cls(float(lhs), float(rhs), float(rhs - lhs), kind, digest)

    @property
    def holds(self) -> bool:
        return self.slack >= -SLACK_TOL * max(1.0, self.rhs)

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else (0.0 if self.lhs == 0 else math.inf)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        keys = {"lhs", "rhs", "slack", "bound_kind", "inputs_digest"}
        if set(d) != keys:
            raise ValueError(f"BoundReport keys must be exactly {sorted(keys)}, got {sorted(d)}")
        return cls(float(d["lhs"]), float(d["rhs"]), float(d["slack"]), str(d["bound_kind"]), str(d["inputs_digest"]))


@dataclass(frozen=True)
class DimensionalConstant:
    d: int
    value: float


def digest(*parts) -> str:
    """Short stable hash of shapes and parameters, for tying a report to its inputs."""

    def norm(x):
        if isinstance(x, PolygonShape):
            return {"rings": [[[repr(float(c)) for c in v] for v in r.vertices] for r in x.rings]}
        if isinstance(x, RigidMotion2):
            return [repr(c) for c in x.as_tuple()]
        if isinstance(x, (tuple, list, np.ndarray)):
            return [norm(y) for y in x]
        if isinstance(x, float):
            return repr(x)
        return x

    payload = json.dumps([norm(p) for p in parts], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def rotation_constant(d: int) -> DimensionalConstant:
    """``(2d/(d+1))^((d-1)/2)``: the general-set factor of the rotation bound in dimension d."""
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    d = int(d)
    return DimensionalConstant(d, (2.0 * d / (d + 1)) ** ((d - 1) / 2.0))


def cavalieri_sweep_area(k: ConvexPolygon, t) -> float:
    """Area swept by ``k`` translated along ``t``: area(k) + |t| * width across t."""
    t = as_point(t)
    length = math.hypot(*t)
    if length == 0.0:
        return k.area
    return k.area + length * projection_extent(k, t)


def displacement_sup(shape: PolygonShape, theta: float, center=(0.0, 0.0)) -> float:
    """Largest distance a boundary point moves under rotation by ``theta`` about ``center``.

    ``|a - Ma| = 2|sin(theta/2)| |a - center|`` and the right side is convex
    in ``a``, so the maximum over a polygon boundary sits at a vertex.
    """
    return 2.0 * abs(math.sin(theta / 2.0)) * max_radius(shape, center)


def translation_symdiff_bound(shape: PolygonShape, t) -> BoundReport:
    t = as_point(t)
    rhs = math.hypot(*t) * perimeter(shape)
    lhs = symdiff_area(shape, shape.translated(t)) if rhs > 0 else 0.0
    return BoundReport.make(lhs, rhs, "translation", digest("translation", shape, tuple(t)))


def rotation_symdiff_bound(
    shape: PolygonShape, theta: float, center=(0.0, 0.0), variant: str = "rectifiable"
) -> BoundReport:
    if variant == "general":
        c, kind = rotation_constant(2).value, "rotation_general"
    elif variant == "rectifiable":
        c, kind = 1.0, "rotation_rectifiable"
    else:
        raise ValueError(f"variant must be 'general' or 'rectifiable', got {variant!r}")
    center = as_point(center)
    rhs = c * displacement_sup(shape, theta, center) * perimeter(shape)
    moved = apply_motion(shape, RigidMotion2.rotation_about(theta, center))
    lhs = symdiff_area(shape, moved)
    return BoundReport.make(lhs, rhs, kind, digest(kind, shape, float(theta), tuple(center)))


def rigid_motion_symdiff_bound(shape: PolygonShape, r: RigidMotion2) -> BoundReport:
    w = displacement_sup(shape, r.theta)
    rhs = (math.hypot(*r.t) + w) * perimeter(shape)
    lhs = symdiff_area(shape, apply_motion(shape, r))
    return BoundReport.make(lhs, rhs, "rigid", digest("rigid", shape, r))


def overlap_lipschitz_bound(shape_a: PolygonShape, r: RigidMotion2, s: RigidMotion2) -> float:
    """Upper bound on ``|F(r) - F(s)|`` for the overlap objective F of ``shape_a``.

    Planar rotations give ``|Ma - Na| = 2|sin((θr - θs)/2)| |a|`` exactly,
    so the displacement term is a vertex maximum as well.
    """
    dt = math.hypot(r.t.x - s.t.x, r.t.y - s.t.y)
    w = 2.0 * abs(math.sin((r.theta - s.theta) / 2.0)) * max_radius(shape_a)
    return 0.5 * (dt + w) * perimeter(shape_a)


def lipschitz_report(
    shape_a: PolygonShape, shape_b: PolygonShape, r: RigidMotion2, s: RigidMotion2
) -> BoundReport:
    lhs = abs(overlap_value(shape_a, r, shape_b) - overlap_value(shape_a, s, shape_b))
    rhs = overlap_lipschitz_bound(shape_a, r, s)
    return BoundReport.make(lhs, rhs, "lipschitz", digest("lipschitz", shape_a, shape_b, r, s))


def cavalieri_report(k: ConvexPolygon | PolygonShape, t) -> BoundReport:
    """Compare ``area(K △ (K+t))`` with twice the swept area outside K.

    (K+t) minus K sits inside the sweep of K along t minus K, whose area is
    ``|t| * width``; the symmetric difference has twice that area at most.
    """
    shape = k.as_shape() if isinstance(k, ConvexPolygon) else k
    hull = k if isinstance(k, ConvexPolygon) else convex_hull(k)
    if not is_convex(shape, hull):
        raise ValueError("the sweep bound needs a convex shape")
    t = as_point(t)
    rhs = 2.0 * (cavalieri_sweep_area(hull, t) - hull.area)
    lhs = symdiff_area(shape, shape.translated(t))
    return BoundReport.make(lhs, rhs, "cavalieri", digest("cavalieri", shape, tuple(t)))


def is_convex(shape: PolygonShape, hull: ConvexPolygon | None = None, rtol: float = 1e-9) -> bool:
    """Convexity gate: the shape fills its hull up to ``rtol`` relative area."""
    hull = convex_hull(shape) if hull is None else hull
    return len(shape.rings) == 1 and hull.area - area(shape) <= rtol * hull.area


def swept_hull_area(k: ConvexPolygon, t) -> float:
    """Area of hull(K ∪ (K+t)), which equals the swept set for convex K."""
    v = k.vertices
    return convex_hull(np.vstack([v, v + np.asarray(as_point(t))])).area

