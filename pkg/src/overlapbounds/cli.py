"""Command-line front end.

Exit status: 0 on success, 1 on invalid input (bad flags, malformed shape
files), 2 when a checked inequality fails.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

from . import bounds, covariogram, grid_oracle, matcher, verify
from .boolean_ops import RobustnessError, intersection_area, symdiff_area
from .geometry import RigidMotion2, ShapeError, apply_motion, area
from .render import render_svg
from .shapefile import ShapeFileError, load_shape

EXIT_OK, EXIT_INVALID, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "--t -0.5,0" and "--box -1,1,-1,1" through as values
        self._negative_number_matcher = re.compile(r"^-(\d|\.\d)[\d.eE+-]*(,[-+]?[\d.eE+-]+)*$")

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _pair(text: str) -> tuple[float, float]:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from None
    if not (math.isfinite(x) and math.isfinite(y)):
        raise argparse.ArgumentTypeError(f"non-finite vector {text!r}")
    return x, y


def _box(text: str) -> tuple[float, float, float, float]:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        vals = ()
    if len(vals) != 4:
        raise argparse.ArgumentTypeError(f"expected 'x0,x1,y0,y1', got {text!r}")
    return vals


def _angle(args, name="theta") -> float:
    v = getattr(args, name)
    return math.radians(v) if args.deg else v


def _motion(args, theta="theta", t="t") -> RigidMotion2:
    return RigidMotion2(_angle(args, theta), getattr(args, t))


def _motion_flags(p, required_t=False):
    p.add_argument("--theta", type=float, default=0.0, help="rotation angle (radians unless --deg)")
    p.add_argument("--t", type=_pair, default=(0.0, 0.0), required=required_t, help="translation 'x,y'")
    p.add_argument("--deg", action="store_true", help="read angles in degrees")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="overlapbounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="evaluate one bound as a JSON BoundReport")
    p.add_argument("kind", choices=["translate", "rotate", "rigid", "lipschitz", "cavalieri"])
    p.add_argument("--shape", required=True, type=Path)
    _motion_flags(p)
    p.add_argument("--center", type=_pair, default=(0.0, 0.0), help="rotation center for 'rotate'")
    p.add_argument("--variant", choices=["general", "rectifiable"], default="rectifiable")
    p.add_argument("--target", type=Path, help="shape B for 'lipschitz'")
    p.add_argument("--theta2", type=float, default=0.0, help="second motion's angle for 'lipschitz'")
    p.add_argument("--t2", type=_pair, default=(0.0, 0.0), help="second motion's translation")

    p = sub.add_parser("symdiff", help="areas of r(A), B, their intersection and symmetric difference")
    p.add_argument("--a", required=True, type=Path)
    p.add_argument("--b", type=Path, help="defaults to A")
    _motion_flags(p)

    p = sub.add_parser("covariogram", help="covariogram value, or a CSV grid with --grid")
    p.add_argument("--shape", required=True, type=Path)
    p.add_argument("--other", type=Path, help="second shape for the cross covariogram")
    p.add_argument("--t", type=_pair, default=(0.0, 0.0))
    p.add_argument("--grid", type=int, help="samples per axis")
    p.add_argument("--extent", type=float, default=1.0, help="grid spans [-extent, extent]^2")

    p = sub.add_parser("match", help="certified overlap maximization")
    p.add_argument("--a", required=True, type=Path)
    p.add_argument("--b", required=True, type=Path)
    p.add_argument("--mode", choices=["rigid", "translation"], default="rigid")
    p.add_argument("--gap", type=float, help="target gap (default 1%% of the smaller area)")
    p.add_argument("--budget", type=int, default=matcher.DEFAULT_BUDGET)
    p.add_argument("--box", type=_box, help="translation box 'x0,x1,y0,y1'")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("landscape", help="CSV grid of the overlap objective")
    p.add_argument("--a", required=True, type=Path)
    p.add_argument("--b", required=True, type=Path)
    p.add_argument("--theta-samples", type=int, default=8)
    p.add_argument("--t-samples", type=int, default=11)
    p.add_argument("--box", type=_box)

    p = sub.add_parser("verify", help="run the randomized property suites")
    p.add_argument("--suite", default="all", help=f"all or a comma list of: {', '.join(verify.SUITES)}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0, help="multiply every suite's instance count")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("comb", help="comb translation experiment")
    p.add_argument("--teeth", type=int, required=True)

    p = sub.add_parser("render", help="SVG of a shape and its moved copy, or a PGM mask")
    p.add_argument("--shape", required=True, type=Path)
    _motion_flags(p)
    p.add_argument("--center", type=_pair, help="rotate about this point instead of the origin")
    p.add_argument("--segments", type=int, default=0, help="number of chords l(a, f(a)) to draw")
    p.add_argument("--size", type=int, default=400)
    p.add_argument("--pgm", type=float, metavar="H", help="write a PGM mask at cell size H instead")
    p.add_argument("--out", type=Path, help="output file (default stdout)")
    return parser


def _report(rep: bounds.BoundReport) -> int:
    _emit(rep.to_dict())
    return EXIT_OK if rep.holds else EXIT_VIOLATION


def cmd_bound(args) -> int:
    shape = load_shape(args.shape)
    if args.kind == "translate":
        return _report(bounds.translation_symdiff_bound(shape, args.t))
    if args.kind == "rotate":
        return _report(bounds.rotation_symdiff_bound(shape, _angle(args), args.center, args.variant))
    if args.kind == "rigid":
        return _report(bounds.rigid_motion_symdiff_bound(shape, _motion(args)))
    if args.kind == "cavalieri":
        return _report(bounds.cavalieri_report(shape, args.t))
    if args.target is None:
        raise UsageError("'bound lipschitz' needs --target")
    target = load_shape(args.target)
    return _report(bounds.lipschitz_report(shape, target, _motion(args), _motion(args, "theta2", "t2")))


def cmd_symdiff(args) -> int:
    a = load_shape(args.a)
    b = load_shape(args.b) if args.b else a
    moved = apply_motion(a, _motion(args))
    _emit(
        {
            "area_a": area(moved),
            "area_b": area(b),
            "intersection": intersection_area(moved, b),
            "symdiff": symdiff_area(moved, b),
        }
    )
    return EXIT_OK


def cmd_covariogram(args) -> int:
    a = load_shape(args.shape)
    other = load_shape(args.other) if args.other else None
    if args.grid:
        axis = covariogram.grid_axis(args.extent, args.grid)
        sys.stdout.write(covariogram.samples_to_csv(covariogram.covariogram_grid(a, axis, axis, other)))
        return EXIT_OK
    value = covariogram.cross_covariogram_value(a, other if other is not None else a, args.t)
    _emit({"tx": args.t[0], "ty": args.t[1], "value": value})
    return EXIT_OK


def cmd_match(args) -> int:
    a, b = load_shape(args.a), load_shape(args.b)
    fn = matcher.match_rigid if args.mode == "rigid" else matcher.match_translations
    res = fn(a, b, args.gap, args.budget, box=args.box, workers=args.workers)
    _emit(res.to_dict())
    return EXIT_OK


def cmd_landscape(args) -> int:
    a, b = load_shape(args.a), load_shape(args.b)
    rows = matcher.landscape(a, b, args.theta_samples, args.t_samples, box=args.box)
    sys.stdout.write(matcher.landscape_csv(rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    names = "all" if args.suite == "all" else args.suite.split(",")
    try:
        results = verify.run_suites(names, seed=args.seed, scale=args.scale, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for r in results:
        sys.stdout.write(r.line() + "\n")
        sys.stderr.write(f"{r.name}: {r.seconds:.2f}s\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


def cmd_comb(args) -> int:
    if args.teeth < 1:
        raise UsageError("--teeth must be at least 1")
    rep = grid_oracle.comb_demo(args.teeth)
    _emit(rep.to_dict())
    return EXIT_OK if rep.symdiff <= rep.translation_rhs * (1 + bounds.SLACK_TOL) else EXIT_VIOLATION


def cmd_render(args) -> int:
    shape = load_shape(args.shape)
    if args.pgm is not None:
        data = grid_oracle.to_pgm(grid_oracle.rasterize(shape, args.pgm))
        if args.out:
            args.out.write_bytes(data)
        else:
            sys.stdout.buffer.write(data)
        return EXIT_OK
    moving = args.theta != 0.0 or args.t != (0.0, 0.0)
    if not moving:
        motion = None
    elif args.center is not None:
        rot = RigidMotion2.rotation_about(_angle(args), args.center)
        motion = RigidMotion2(rot.theta, (rot.t.x + args.t[0], rot.t.y + args.t[1]))
    else:
        motion = _motion(args)
    svg = render_svg(shape, motion, segments=args.segments, size=args.size)
    if args.out:
        args.out.write_text(svg, encoding="utf-8")
    else:
        sys.stdout.write(svg)
    return EXIT_OK


COMMANDS = {
    "bound": cmd_bound,
    "symdiff": cmd_symdiff,
    "covariogram": cmd_covariogram,
    "match": cmd_match,
    "landscape": cmd_landscape,
    "verify": cmd_verify,
    "comb": cmd_comb,
    "render": cmd_render,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.verb](args)
    except (ShapeFileError, ShapeError, UsageError, OSError, ValueError, RobustnessError) as exc:
        sys.stderr.write(f"overlapbounds: {exc}\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
