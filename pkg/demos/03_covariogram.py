"""
The covariogram and its slope at the origin
===========================================

g(t) = area((A + t) ∩ A).  For convex A the one-sided slope at 0 along a
unit direction u is minus the width of A across u.
"""
import math

import numpy as np

from overlapbounds import covariogram_value, directional_derivative, width_derivative_limit
from overlapbounds.covariogram import covariogram_grid, grid_axis, samples_to_csv
from overlapbounds.shapes import random_convex_polygon, unit_square

sq = unit_square()
print("g(0.25, 0) =", covariogram_value(sq, (0.25, 0.0)))

# Forward differences converge to -width; the square's is exact.
for lam in (1e-1, 1e-2, 1e-4):
    q = directional_derivative(sq, (1 / math.sqrt(2), 1 / math.sqrt(2)), lam)
    print(f"lambda {lam:.0e}: quotient {q:.8f}  (limit {-math.sqrt(2):.8f})")

rng = np.random.default_rng(3)
k = random_convex_polygon(rng)
for ang in np.linspace(0, math.pi, 5, endpoint=False):
    u = (math.cos(ang), math.sin(ang))
    print(f"u at {ang:4.2f} rad: {directional_derivative(k, u, 1e-5):9.6f} vs {width_derivative_limit(k, u):9.6f}")

# A small table, as the CLI would write it.
axis = grid_axis(1.0, 3)
print(samples_to_csv(covariogram_grid(sq, axis, axis)), end="")
