"""Box-counting dimension with square and triangle delta-meshes.

Exact dyadic geometry, Bradley spiral prefractals, mesh counters, log-log fits
and a scikit-learn style estimator on top.
"""
from .dyadic import Dyadic, as_scalar, format_scalar, parse_scalar, scalar_normalize
from .estimation import (FitResult, Schedule, converge_ratio, cover_count_formula, fit_loglog,
                         make_schedule, parse_schedule, ratio_estimate)
from .estimator import BoxCountingDimension, MeshCounter
from .exceptions import (BoxDimError, DomainError, EmptyInputError, InsufficientDataError,
                         ModeError, NonConvergenceError, ParseError, ResourceError,
                         ValidationError)
from .fracgeo import read_fracgeo, write_fracgeo
from .generators import (PrefractalSpec, StageTrace, bradley_stage, construction_decomposition,
                         inscribed_square, reference_prefractal, removal_direction)
from .geometry import (ConvexPrimitive, GeoSet, Point, bounding_box, convex_area,
                       convex_intersects, total_area)
from .mesh import (CellKey, CountRecord, MeshSpec, count_square_mesh, count_triangle_mesh,
                   enumerate_candidate_cells, sampling_oracle_count)
from .report import compare_meshes, run_compare

__all__ = [
    "Dyadic", "as_scalar", "format_scalar", "parse_scalar", "scalar_normalize",
    "ConvexPrimitive", "GeoSet", "Point", "bounding_box", "convex_area", "convex_intersects",
    "total_area", "read_fracgeo", "write_fracgeo",
    "PrefractalSpec", "StageTrace", "bradley_stage", "construction_decomposition",
    "inscribed_square", "reference_prefractal", "removal_direction",
    "CellKey", "CountRecord", "MeshSpec", "count_square_mesh", "count_triangle_mesh",
    "enumerate_candidate_cells", "sampling_oracle_count",
    "FitResult", "Schedule", "converge_ratio", "cover_count_formula", "fit_loglog",
    "make_schedule", "parse_schedule", "ratio_estimate",
    "BoxCountingDimension", "MeshCounter", "compare_meshes", "run_compare",
    "BoxDimError", "DomainError", "EmptyInputError", "InsufficientDataError", "ModeError",
    "NonConvergenceError", "ParseError", "ResourceError", "ValidationError",
]

__version__ = "0.1.0"
