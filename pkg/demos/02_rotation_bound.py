"""
Rotating a set: the two rotation constants
==========================================

For a rotation by theta about a center, every boundary point moves at most
w = 2 |sin(theta/2)| R.  The symmetric difference is bounded by w times the
perimeter, times a constant that is 1 for polygons and slightly larger for
arbitrary bounded sets.
"""
import math
from pathlib import Path

import numpy as np

from overlapbounds import rotation_constant, rotation_symdiff_bound
from overlapbounds.geometry import RigidMotion2
from overlapbounds.render import render_svg
from overlapbounds.shapes import l_shape, unit_square

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

for d in (1, 2, 3, 5, 10):
    print(f"constant in dimension {d:2d}: {rotation_constant(d).value:.6f}")

# The centered square and an eighth turn: an octagon of overlap.
sq = unit_square(centered=True)
for variant in ("rectifiable", "general"):
    rep = rotation_symdiff_bound(sq, math.pi / 4, variant=variant)
    print(f"{variant:11s}: symdiff {rep.lhs:.6f} <= {rep.rhs:.6f}")

# Sweep the angle for an L shape rotating about its corner.
print("theta   symdiff   bound")
for theta in np.linspace(0, math.pi, 7):
    rep = rotation_symdiff_bound(l_shape(), theta, center=(0.0, 0.0))
    print(f"{theta:5.3f}  {rep.lhs:8.5f}  {rep.rhs:8.5f}")

# The chords l(a, Ma) from boundary points to their images cover the
# symmetric difference; draw 32 of them.
(out / "square_rotation.svg").write_text(render_svg(sq, RigidMotion2(math.pi / 4), segments=32))
print("wrote", out / "square_rotation.svg")
