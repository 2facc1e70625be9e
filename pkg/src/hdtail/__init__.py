"""Halfspace depth engine and depth-based tail diagnostics."""
from .contour import DepthContour, depth_contour_2d, nested_contours
from .depth import (
    DepthValue,
    PointCloud,
    ProjectedSample,
    approx_counts,
    depth,
    depth_approx,
    depth_counts_2d,
    depth_exact_2d,
    depth_exact_brute,
    project,
    univariate_depth,
)
from .directions import (
    DirectionSet,
    RotationMatrix,
    canonical_directions,
    default_directions,
    grid_2d,
    haar_rotation,
    paper_rotation_3d,
    sphere_sample,
)
from .distributions import (
    DistributionSpec,
    Marginal,
    PopulationDepth,
    TailBoundG,
    builtin_spec,
    population_depth,
    population_depth_estimate,
    sample,
    tail_lower_bound,
)
from .errors import (
    ConfigError,
    DataError,
    HDTailError,
    InsufficientRangeError,
    InvalidArgumentError,
    PrecisionWarning,
    ResourceLimitError,
    UnsupportedError,
)
from .schedules import GammaSequence, Schedule, TMap, check_conditions, gamma_sequence, t_schedule

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DataError", "DepthContour", "DepthValue", "DirectionSet", "DistributionSpec",
    "GammaSequence", "HDTailError", "InsufficientRangeError", "InvalidArgumentError", "Marginal",
    "PointCloud", "PopulationDepth", "PrecisionWarning", "ProjectedSample", "ResourceLimitError",
    "RotationMatrix", "Schedule", "TMap", "TailBoundG", "UnsupportedError", "approx_counts",
    "builtin_spec", "canonical_directions", "check_conditions", "default_directions", "depth",
    "depth_approx", "depth_contour_2d", "depth_counts_2d", "depth_exact_2d", "depth_exact_brute",
    "gamma_sequence", "grid_2d", "haar_rotation", "nested_contours", "paper_rotation_3d",
    "population_depth", "population_depth_estimate", "project", "sample", "sphere_sample",
    "t_schedule", "tail_lower_bound", "univariate_depth",
]
