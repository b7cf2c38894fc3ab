"""Certified maximization of the overlap ``F(r) = area(r(A) ∩ B)``.

Best-first branch and bound over boxes of motions.  A box's upper bound is
``F(center)`` plus the Lipschitz-type estimate

    |F(r) - F(s)| <= 1/2 (|p - q| + 2 |sin(Δθ/2)| R) per(A)

evaluated at the box's farthest corner, where ``R`` is the largest distance
of a vertex of A from the rotation pivot.  For rigid searches A is first
shifted so that its centroid sits at the origin, which makes ``R`` as small
as the vertex set allows; results are mapped back to motions of the
original A (rotation about the origin, then translation).
"""
from __future__ import annotations

import heapq
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
import shapely
from shapely.errors import GEOSException

from .boolean_ops import RobustnessError
from .geometry import (
    TWO_PI,
    Point2,
    PolygonShape,
    RigidMotion2,
    apply_motion,
    area,
    centroid,
    compose,
    max_radius,
    perimeter,
    rotation_matrix,
)

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class MotionCell:
    theta_lo: float
    theta_hi: float
    tx_lo: float
    tx_hi: float
    ty_lo: float
    ty_hi: float
    center_value: float = 0.0
    upper_bound: float = math.inf

    @property
    def center(self) -> tuple[float, float, float]:
        return (
            0.5 * (self.theta_lo + self.theta_hi),
            0.5 * (self.tx_lo + self.tx_hi),
            0.5 * (self.ty_lo + self.ty_hi),
        )

    @property
    def half_theta(self) -> float:
        return 0.5 * (self.theta_hi - self.theta_lo)

    @property
    def half_diagonal(self) -> float:
        return 0.5 * math.hypot(self.tx_hi - self.tx_lo, self.ty_hi - self.ty_lo)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """``n`` uniform (theta, tx, ty) triples inside the cell."""
        lo = np.array([self.theta_lo, self.tx_lo, self.ty_lo])
        hi = np.array([self.theta_hi, self.tx_hi, self.ty_hi])
        return lo + rng.random((n, 3)) * (hi - lo)


@dataclass(frozen=True)
class MatchResult:
    best_motion: RigidMotion2
    best_value: float
    certified_upper: float
    gap: float
    cells_expanded: int
    status: str

    def to_dict(self) -> dict:
        return {
            "theta": self.best_motion.theta,
            "tx": self.best_motion.t.x,
            "ty": self.best_motion.t.y,
            "best_value": self.best_value,
            "certified_upper": self.certified_upper,
            "gap": self.gap,
            "cells_expanded": self.cells_expanded,
            "status": self.status,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "MatchResult":
        keys = {"theta", "tx", "ty", "best_value", "certified_upper", "gap", "cells_expanded", "status"}
        if set(d) != keys:
            raise ValueError(f"MatchResult keys must be exactly {sorted(keys)}, got {sorted(d)}")
        return cls(
            RigidMotion2(d["theta"], (d["tx"], d["ty"])),
            float(d["best_value"]),
            float(d["certified_upper"]),
            float(d["gap"]),
            int(d["cells_expanded"]),
            str(d["status"]),
        )


class OverlapProblem:
    """The overlap objective in search coordinates, with its cell bounds.

    Search coordinates are ``(theta, tx, ty)`` applied to the pivoted copy
    of A (A minus ``pivot``); :meth:`motion` converts them to a motion of A.
    """

    def __init__(self, a: PolygonShape, b: PolygonShape, rigid: bool):
        self.a, self.b, self.rigid = a, b, rigid
        self.pivot = centroid(a) if rigid else Point2(0.0, 0.0)
        self.a_pivoted = apply_motion(a, RigidMotion2(0.0, (-self.pivot.x, -self.pivot.y)))
        self.radius = max_radius(self.a_pivoted) if rigid else 0.0
        self.perimeter = perimeter(a)
        self.cap = min(area(a), area(b))
        self._ga = self.a_pivoted.geom
        self._gb = b.geom
        shapely.prepare(self._gb)
        self._bbox_a = self.a_pivoted.bounds
        self._bbox_b = b.bounds

    def value(self, theta: float, tx: float, ty: float) -> float:
        rot = rotation_matrix(theta).T
        shift = np.array([tx, ty])
        moved = shapely.transform(self._ga, lambda c: c @ rot + shift)
        if not shapely.intersects(moved, self._gb):
            return 0.0
        try:
            v = shapely.intersection(moved, self._gb).area
        except GEOSException as exc:
            raise RobustnessError(f"polygon overlay failed: {exc}") from exc
        if not (-1e-9 <= v <= self.cap * (1 + 1e-9) + 1e-12):
            raise RobustnessError(f"overlap {v!r} outside [0, {self.cap!r}]")
        return min(max(v, 0.0), self.cap)

    def motion(self, theta: float, tx: float, ty: float) -> RigidMotion2:
        return compose(RigidMotion2(theta, (tx, ty)), RigidMotion2(0.0, (-self.pivot.x, -self.pivot.y)))

    def default_box(self) -> MotionCell:
        """Every motion with possibly nonzero overlap."""
        bx0, by0, bx1, by1 = self._bbox_b
        if self.rigid:
            r = self.radius
            return MotionCell(0.0, TWO_PI, bx0 - r, bx1 + r, by0 - r, by1 + r)
        ax0, ay0, ax1, ay1 = self._bbox_a
        return MotionCell(0.0, 0.0, bx0 - ax1, bx1 - ax0, by0 - ay1, by1 - ay0)

    def disjoint(self, c: MotionCell) -> bool:
        """True when no motion in ``c`` can make A meet the bounding box of B."""
        bx0, by0, bx1, by1 = self._bbox_b
        if self.rigid:
            dx = max(bx0 - c.tx_hi, c.tx_lo - bx1, 0.0)
            dy = max(by0 - c.ty_hi, c.ty_lo - by1, 0.0)
            return math.hypot(dx, dy) > self.radius
        ax0, ay0, ax1, ay1 = self._bbox_a
        return (
            ax1 + c.tx_hi < bx0 or ax0 + c.tx_lo > bx1 or ay1 + c.ty_hi < by0 or ay0 + c.ty_lo > by1
        )

    def rotation_term(self, c: MotionCell) -> float:
        return math.sin(min(c.half_theta / 2.0, math.pi / 2.0)) * self.radius * self.perimeter

    def translation_term(self, c: MotionCell) -> float:
        return 0.5 * c.half_diagonal * self.perimeter

    def evaluate(self, c: MotionCell) -> MotionCell:
        """Fill in the center value and the certified upper bound of ``c``."""
        if self.disjoint(c):
            return MotionCell(c.theta_lo, c.theta_hi, c.tx_lo, c.tx_hi, c.ty_lo, c.ty_hi, 0.0, 0.0)
        f = self.value(*c.center)
        ub = f + self.translation_term(c) + (self.rotation_term(c) if self.rigid else 0.0)
        return MotionCell(c.theta_lo, c.theta_hi, c.tx_lo, c.tx_hi, c.ty_lo, c.ty_hi, f, min(ub, self.cap))

    def split(self, c: MotionCell) -> tuple[MotionCell, MotionCell]:
        """Halve the axis contributing most to the bound."""
        if self.rigid and self.rotation_term(c) >= self.translation_term(c):
            m = 0.5 * (c.theta_lo + c.theta_hi)
            return (
                MotionCell(c.theta_lo, m, c.tx_lo, c.tx_hi, c.ty_lo, c.ty_hi),
                MotionCell(m, c.theta_hi, c.tx_lo, c.tx_hi, c.ty_lo, c.ty_hi),
            )
        if c.tx_hi - c.tx_lo >= c.ty_hi - c.ty_lo:
            m = 0.5 * (c.tx_lo + c.tx_hi)
            return (
                MotionCell(c.theta_lo, c.theta_hi, c.tx_lo, m, c.ty_lo, c.ty_hi),
                MotionCell(c.theta_lo, c.theta_hi, m, c.tx_hi, c.ty_lo, c.ty_hi),
            )
        m = 0.5 * (c.ty_lo + c.ty_hi)
        return (
            MotionCell(c.theta_lo, c.theta_hi, c.tx_lo, c.tx_hi, c.ty_lo, m),
            MotionCell(c.theta_lo, c.theta_hi, c.tx_lo, c.tx_hi, m, c.ty_hi),
        )

    def size(self, c: MotionCell) -> float:
        return c.half_diagonal + c.half_theta * self.radius

    def solve(
        self,
        gap_target: float | None = None,
        budget: int = DEFAULT_BUDGET,
        box: MotionCell | None = None,
        workers: int = 1,
        trace: Callable[[MotionCell], None] | None = None,
    ) -> MatchResult:
        """Best-first search; ``trace`` sees every evaluated cell."""
        if gap_target is None:
            gap_target = 1e-2 * self.cap
        if not gap_target > 0:
            raise ValueError("gap target must be positive")
        root = self.evaluate(box or self.default_box())
        if trace:
            trace(root)
        best_value, best_center = root.center_value, root.center
        counter = 0

        def key(c: MotionCell):
            return (-c.upper_bound, self.size(c), c.theta_lo, c.tx_lo, c.ty_lo)

        heap = [(key(root), counter, root)]
        pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
        expanded = 0
        status = "converged"
        try:
            while heap:
                top = heap[0][2]
                if top.upper_bound - best_value <= gap_target:
                    break
                if expanded >= budget:
                    status = "budget_exhausted"
                    break
                heapq.heappop(heap)
                if top.upper_bound <= best_value:
                    continue
                children = self.split(top)
                children = list(pool.map(self.evaluate, children)) if pool else [self.evaluate(c) for c in children]
                expanded += 1
                for child in children:
                    if trace:
                        trace(child)
                    if child.center_value > best_value:
                        best_value, best_center = child.center_value, child.center
                    if child.upper_bound > best_value:
                        counter += 1
                        heapq.heappush(heap, (key(child), counter, child))
        finally:
            if pool:
                pool.shutdown()
        upper = max(best_value, heap[0][2].upper_bound if heap else best_value)
        return MatchResult(
            best_motion=self.motion(*best_center),
            best_value=best_value,
            certified_upper=upper,
            gap=upper - best_value,
            cells_expanded=expanded,
            status=status,
        )


def match_translations(
    a: PolygonShape,
    b: PolygonShape,
    gap_target: float | None = None,
    budget: int = DEFAULT_BUDGET,
    box: tuple[float, float, float, float] | None = None,
    workers: int = 1,
) -> MatchResult:
    """Maximize ``area((a + t) ∩ b)`` over translations ``t``.

    ``box`` is ``(tx_lo, tx_hi, ty_lo, ty_hi)``; by default every translation
    whose bounding boxes overlap.
    """
    problem = OverlapProblem(a, b, rigid=False)
    cell = MotionCell(0.0, 0.0, *box) if box is not None else None
    return problem.solve(gap_target, budget, cell, workers)


def match_rigid(
    a: PolygonShape,
    b: PolygonShape,
    gap_target: float | None = None,
    budget: int = DEFAULT_BUDGET,
    box: tuple[float, float, float, float] | None = None,
    workers: int = 1,
) -> MatchResult:
    """Maximize ``area(r(a) ∩ b)`` over rigid motions, theta in [0, 2π).

    ``box`` bounds where the centroid of ``a`` is sent, as
    ``(tx_lo, tx_hi, ty_lo, ty_hi)``.
    """
    problem = OverlapProblem(a, b, rigid=True)
    cell = MotionCell(0.0, TWO_PI, *box) if box is not None else None
    return problem.solve(gap_target, budget, cell, workers)


def landscape(
    a: PolygonShape,
    b: PolygonShape,
    theta_samples: int,
    t_samples: int,
    box: tuple[float, float, float, float] | None = None,
) -> list[tuple[float, float, float, float]]:
    """Grid of ``(theta, tx, ty, F)`` for motions ``x -> R(theta) x + t`` of ``a``.

    Angles are ``2πi/theta_samples``; translations span ``box`` (default:
    B's bounding box grown by the largest vertex distance of A from the
    origin, which contains every translation with nonzero overlap).
    """
    if theta_samples < 1 or t_samples < 1:
        raise ValueError("sample counts must be at least 1")
    if box is None:
        r = max_radius(a)
        bx0, by0, bx1, by1 = b.bounds
        box = (bx0 - r, bx1 + r, by0 - r, by1 + r)
    problem = OverlapProblem(a, b, rigid=False)
    xs = np.linspace(box[0], box[1], t_samples) if t_samples > 1 else np.array([0.5 * (box[0] + box[1])])
    ys = np.linspace(box[2], box[3], t_samples) if t_samples > 1 else np.array([0.5 * (box[2] + box[3])])
    rows = []
    for i in range(theta_samples):
        theta = TWO_PI * i / theta_samples
        for ty in ys:
            for tx in xs:
                rows.append((theta, float(tx), float(ty), problem.value(theta, tx, ty)))
    return rows


def landscape_csv(rows) -> str:
    lines = ["theta,tx,ty,F"]
    lines += [f"{th!r},{tx!r},{ty!r},{f!r}" for th, tx, ty, f in rows]
    return "\n".join(lines) + "\n"
