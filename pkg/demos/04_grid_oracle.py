"""
A raster cross-check and the covering segments
==============================================

Rasterizing on a lattice anchored at the origin gives an estimate of every
area that shares no code with the polygon overlay.  The same lattice is used
to check that each point of A △ f(A) lies on some segment from a boundary
point a to f(a).
"""
from pathlib import Path

import numpy as np

from overlapbounds import symdiff_area
from overlapbounds.geometry import perimeter
from overlapbounds.grid_oracle import (
    covering_check_rotation,
    covering_check_translation,
    mask_symdiff_area,
    rasterize,
    to_pgm,
)
from overlapbounds.shapes import l_shape, random_star_polygon

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

rng = np.random.default_rng(0)
a = random_star_polygon(rng, scale=1.0, spread=2.0)
b = random_star_polygon(rng, scale=1.0, spread=2.0)
print("h       raster      exact      allowed error")
for h in (0.1, 0.03, 0.01, 0.003):
    est = mask_symdiff_area(rasterize(a, h), rasterize(b, h))
    tol = 2 * h * (perimeter(a) + perimeter(b)) + 8 * h * h
    print(f"{h:<6g}  {est:9.6f}  {symdiff_area(a, b):9.6f}  {tol:9.6f}")

(out / "star.pgm").write_bytes(to_pgm(rasterize(a, 0.01)))
print("wrote", out / "star.pgm")

# Uncovered lattice points would be counted here; there should be none.
print("translation, uncovered:", covering_check_translation(l_shape(), (0.3, 0.2), 1e-2))
print("rotation,    uncovered:", covering_check_rotation(l_shape(), 0.4, 1e-2))
