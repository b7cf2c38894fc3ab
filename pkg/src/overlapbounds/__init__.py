"""Symmetric-difference area bounds for planar polygons under rigid motions.

Exact clipping areas, closed-form bounds, a lattice oracle and a certified
overlap maximizer.
"""
from .boolean_ops import (
    RobustnessError,
    intersection_area,
    overlap_value,
    symdiff_area,
    union_area,
)
from .bounds import (
    BoundReport,
    cavalieri_report,
    cavalieri_sweep_area,
    displacement_sup,
    lipschitz_report,
    overlap_lipschitz_bound,
    rigid_motion_symdiff_bound,
    rotation_constant,
    rotation_symdiff_bound,
    translation_symdiff_bound,
)
from .covariogram import covariogram_value, cross_covariogram_value, directional_derivative, width_derivative_limit
from .geometry import (
    PolygonShape,
    RigidMotion2,
    Ring,
    ShapeError,
    apply_motion,
    area,
    centroid,
    convex_hull,
    max_radius,
    perimeter,
    projection_extent,
)
from .grid_oracle import GridMask, comb_demo, mask_symdiff_area, rasterize
from .matcher import MatchResult, landscape, match_rigid, match_translations
from .shapefile import ShapeFileError, dump_shape, load_shape, parse_shape

__version__ = "0.1.0"

__all__ = [
    "apply_motion",
    "area",
    "BoundReport",
    "cavalieri_report",
    "cavalieri_sweep_area",
    "centroid",
    "comb_demo",
    "convex_hull",
    "covariogram_value",
    "cross_covariogram_value",
    "directional_derivative",
    "displacement_sup",
    "dump_shape",
    "GridMask",
    "intersection_area",
    "landscape",
    "lipschitz_report",
    "load_shape",
    "mask_symdiff_area",
    "match_rigid",
    "match_translations",
    "MatchResult",
    "width_derivative_limit",
    "max_radius",
    "overlap_lipschitz_bound",
    "overlap_value",
    "parse_shape",
    "perimeter",
    "PolygonShape",
    "projection_extent",
    "rasterize",
    "rigid_motion_symdiff_bound",
    "RigidMotion2",
    "Ring",
    "RobustnessError",
    "rotation_constant",
    "rotation_symdiff_bound",
    "ShapeError",
    "ShapeFileError",
    "symdiff_area",
    "translation_symdiff_bound",
    "union_area",
]
