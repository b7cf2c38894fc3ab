"""Seeded randomized checks of every inequality the library evaluates.

Each suite draws its instances from one ``numpy.random.Generator`` and
reports how many instances violated their inequality.  The CLI ``verify``
verb and the acceptance tests both run these.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import bounds, covariogram, grid_oracle
from .boolean_ops import overlap_value, symdiff_area
from .geometry import (
    TWO_PI,
    PolygonShape,
    RigidMotion2,
    apply_motion,
    area,
    centroid,
    perimeter,
)
from .matcher import OverlapProblem
from .shapes import random_convex_polygon, random_star_polygon, unit_square

TOL = 1e-9


@dataclass
class SuiteResult:
    name: str
    instances: int = 0
    failures: int = 0
    worst: float = math.inf  # smallest margin seen; negative means a violation
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.instances > 0 and self.failures == 0

    def record(self, ok: bool, margin: float) -> None:
        self.instances += 1
        self.failures += 0 if ok else 1
        self.worst = min(self.worst, margin)

    def line(self, timing: bool = False) -> str:
        """One-line summary; without ``timing`` it depends only on the seed."""
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"{status} {self.name}: {self.instances} instances, {self.failures} failures, "
            f"worst margin {self.worst:.3e}"
        )
        return text + f", {self.seconds:.2f}s" if timing else text


def random_polygon(rng: np.random.Generator, spread: float = 10.0) -> PolygonShape:
    """Star-shaped polygon with 3 to 30 vertices, coordinates inside [-spread, spread]."""
    return random_star_polygon(rng, scale=rng.uniform(0.2, 0.5) * spread, spread=spread)


def random_vector(rng: np.random.Generator, max_norm: float) -> np.ndarray:
    ang = rng.uniform(0, TWO_PI)
    r = max_norm * math.sqrt(rng.uniform())
    return np.array([r * math.cos(ang), r * math.sin(ang)])


def _timed(fn):
    def run(rng, n, **kw):
        t0 = time.perf_counter()
        res = fn(rng, n, **kw)
        res.seconds = time.perf_counter() - t0
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _slack_ok(rep: bounds.BoundReport) -> tuple[bool, float]:
    margin = rep.slack + TOL * rep.rhs
    return margin >= 0, rep.slack


@_timed
def suite_translation(rng, n=1000, **_):
    """Translation bound on random polygons, |t| <= 5."""
    res = SuiteResult("translation")
    for _ in range(n):
        a = random_polygon(rng)
        rep = bounds.translation_symdiff_bound(a, random_vector(rng, 5.0))
        res.record(*_slack_ok(rep))
    return res


@_timed
def suite_rotation(rng, n=500, **_):
    """Rotation bound, both constants, about random centers."""
    res = SuiteResult("rotation")
    for _ in range(n):
        a = random_polygon(rng)
        theta = rng.uniform(0, TWO_PI)
        center = rng.uniform(-10, 10, size=2)
        general = bounds.rotation_symdiff_bound(a, theta, center, "general")
        rect = bounds.rotation_symdiff_bound(a, theta, center, "rectifiable")
        ok_g, m_g = _slack_ok(general)
        ok_r, m_r = _slack_ok(rect)
        res.record(ok_g and ok_r, min(m_g, m_r))
    return res


@_timed
def suite_rigid(rng, n=500, **_):
    """Rigid-motion bound (|t| + w) per(A)."""
    res = SuiteResult("rigid")
    for _ in range(n):
        a = random_polygon(rng)
        r = RigidMotion2(rng.uniform(0, TWO_PI), random_vector(rng, 5.0))
        res.record(*_slack_ok(bounds.rigid_motion_symdiff_bound(a, r)))
    return res


def _nearby_motion(rng, r: RigidMotion2) -> RigidMotion2:
    return RigidMotion2(r.theta + rng.normal(0, 0.3), np.asarray(r.t) + rng.normal(0, 0.5, size=2))


@_timed
def suite_lipschitz(rng, n=500, **_):
    """|F(r) - F(s)| against the overlap Lipschitz bound, with overlapping shapes."""
    res = SuiteResult("lipschitz")
    for _ in range(n):
        a = random_star_polygon(rng, scale=rng.uniform(0.5, 3.0), spread=5.0)
        b = random_star_polygon(rng, scale=rng.uniform(0.5, 3.0), spread=5.0)
        ca, cb = centroid(a), centroid(b)
        theta = rng.uniform(0, TWO_PI)
        rot = RigidMotion2(theta)
        # aim r(A)'s centroid near B's centroid so F(r) is usually positive
        moved_c = rot.apply(np.asarray(ca))
        r = RigidMotion2(theta, np.asarray(cb) - moved_c + rng.normal(0, 0.5, size=2))
        s = _nearby_motion(rng, r)
        lhs = abs(overlap_value(a, r, b) - overlap_value(a, s, b))
        rhs = bounds.overlap_lipschitz_bound(a, r, s)
        res.record(lhs <= rhs + TOL, rhs - lhs)
    return res


@_timed
def suite_derivative(rng, n=50, directions=8, lam=1e-4, **_):
    """Forward differences of the covariogram against minus the width."""
    res = SuiteResult("derivative")
    sq = unit_square()
    q = covariogram.directional_derivative(sq, (1.0, 0.0), lam)
    res.record(abs(q + 1.0) <= 1e-9, 1e-9 - abs(q + 1.0))
    for _ in range(n):
        a = random_convex_polygon(rng, scale=rng.uniform(0.5, 2.0))
        for k in range(directions):
            ang = rng.uniform(0, math.pi / directions) + k * math.pi / directions
            u = (math.cos(ang), math.sin(ang))
            q = covariogram.directional_derivative(a, u, lam)
            expected = covariogram.width_derivative_limit(a, u)
            err = abs(q - expected) / abs(expected)
            res.record(err <= 1e-3, 1e-3 - err)
    return res


def covering_instance(rng) -> PolygonShape:
    """Small polygon for the lattice-based covering checks."""
    return random_star_polygon(rng, scale=rng.uniform(0.4, 0.8), center=rng.uniform(-0.5, 0.5, size=2))


@_timed
def suite_covering(rng, n=20, h=1e-2, workers=1, **_):
    """Lattice points of A △ f(A) lie within h√2 of the segments ℓ(a, f(a))."""
    res = SuiteResult("covering")
    for _ in range(n):
        a = covering_instance(rng)
        v = grid_oracle.covering_check_translation(a, random_vector(rng, 0.5), h, workers=workers)
        res.record(v == 0, -float(v) if v else 0.0)
    for _ in range(n):
        a = covering_instance(rng)
        v = grid_oracle.covering_check_rotation(a, rng.uniform(0, TWO_PI), h, workers=workers)
        res.record(v == 0, -float(v) if v else 0.0)
    return res


def random_mask_triple(rng, h: float = 1.0, size=(24, 24)):
    """Random D, G, E on one lattice with exactly equal cell counts for D and G."""
    shape_d = (int(rng.integers(4, size[0])), int(rng.integers(4, size[1])))
    shape_g = (int(rng.integers(4, size[0])), int(rng.integers(4, size[1])))
    count = int(rng.integers(0, min(np.prod(shape_d), np.prod(shape_g)) + 1))

    def with_count(shape):
        flat = np.zeros(int(np.prod(shape)), dtype=bool)
        flat[rng.choice(flat.size, count, replace=False)] = True
        return flat.reshape(shape)

    def offset():
        return int(rng.integers(-6, 7)), int(rng.integers(-6, 7))

    d = grid_oracle.GridMask(*offset(), h, with_count(shape_d))
    g = grid_oracle.GridMask(*offset(), h, with_count(shape_g))
    e_shape = (int(rng.integers(4, size[0])), int(rng.integers(4, size[1])))
    e = grid_oracle.GridMask(*offset(), h, rng.random(e_shape) < rng.uniform(0.1, 0.9))
    return d, g, e


@_timed
def suite_proposition(rng, n=200, **_):
    """Overlap difference of equal-measure sets against μ(D \\ G) and ½ μ(D △ G)."""
    res = SuiteResult("proposition")
    for _ in range(n):
        d, g, e = random_mask_triple(rng, h=float(rng.choice([1.0, 0.1, 0.01])))
        rep = grid_oracle.overlap_difference_check(d, g, e)
        margin = min(rep.difference_bound, rep.half_symdiff_bound) + rep.tolerance - rep.lhs
        res.record(rep.holds, margin)
    return res


def oracle_pair(rng):
    a = random_star_polygon(rng, scale=rng.uniform(0.3, 1.5), spread=2.0)
    b = random_star_polygon(rng, scale=rng.uniform(0.3, 1.5), spread=2.0)
    return a, b


@_timed
def suite_oracle(rng, n=200, h=1e-2, **_):
    """Clipping symmetric difference against the raster estimate."""
    res = SuiteResult("oracle")
    for _ in range(n):
        a, b = oracle_pair(rng)
        exact = symdiff_area(a, b)
        raster = grid_oracle.mask_symdiff_area(grid_oracle.rasterize(a, h), grid_oracle.rasterize(b, h))
        tol = 2 * h * (perimeter(a) + perimeter(b)) + 8 * h * h
        res.record(abs(exact - raster) <= tol, tol - abs(exact - raster))
    return res


def matcher_instance(rng):
    a = random_star_polygon(rng, n=int(rng.integers(3, 13)), scale=rng.uniform(0.5, 1.5), spread=3.0)
    r = RigidMotion2(rng.uniform(0, TWO_PI), rng.uniform(-2, 2, size=2))
    return a, apply_motion(a, r), r


def probe_certificate(problem: OverlapProblem, box, certified_upper: float, rng, probes: int) -> float:
    """Largest ``F(probe) - certified_upper`` over uniform probes of ``box``."""
    worst = -math.inf
    for theta, tx, ty in box.sample(rng, probes):
        worst = max(worst, problem.value(theta, tx, ty) - certified_upper)
    return worst


@_timed
def suite_matcher(rng, n=20, probes=10_000, workers=1, **_):
    """Rigid matcher on exact copies: convergence, recovery and probe-checked certificate."""
    res = SuiteResult("matcher")
    for _ in range(n):
        a, b, _r = matcher_instance(rng)
        problem = OverlapProblem(a, b, rigid=True)
        box = problem.default_box()
        out = problem.solve(workers=workers)
        excess = probe_certificate(problem, box, out.certified_upper, rng, probes)
        ok = out.status == "converged" and out.best_value >= 0.99 * area(a) and excess <= TOL
        res.record(ok, min(out.best_value - 0.99 * area(a), -excess))
    return res


SUITES = {
    "translation": suite_translation,
    "rotation": suite_rotation,
    "rigid": suite_rigid,
    "lipschitz": suite_lipschitz,
    "derivative": suite_derivative,
    "covering": suite_covering,
    "proposition": suite_proposition,
    "oracle": suite_oracle,
    "matcher": suite_matcher,
}

DEFAULT_COUNTS = {
    "translation": 1000,
    "rotation": 500,
    "rigid": 500,
    "lipschitz": 500,
    "derivative": 50,
    "covering": 20,
    "proposition": 200,
    "oracle": 200,
    "matcher": 20,
}


def run_suites(names, seed: int = 0, scale: float = 1.0, workers: int = 1) -> list[SuiteResult]:
    """Run suites in order; each suite gets its own generator spawned from ``seed``."""
    names = list(SUITES) if names in ("all", ["all"]) else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
    seeds = np.random.SeedSequence(seed).spawn(len(SUITES))
    by_name = dict(zip(SUITES, seeds))
    out = []
    for name in names:
        rng = np.random.default_rng(by_name[name])
        n = max(1, int(round(DEFAULT_COUNTS[name] * scale)))
        out.append(SUITES[name](rng, n, workers=workers))
    return out
