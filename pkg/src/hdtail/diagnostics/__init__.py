"""Tail diagnostics built on depth-decay curves."""
from .bounds import SandwichReport, marginal_upper_bound, sandwich_check
from .classify import (
    ClassifierConfig,
    DatasetVerdict,
    TailVerdict,
    classify_dataset,
    classify_direction,
    trend,
)
from .curves import HDCurve, depth_counts_along, direction_label, hd_curve, transform_error
from .experiments import (
    MRVSeries,
    RatioSeries,
    SymmetrySeries,
    convergence_curves,
    ellipse_pairs,
    mrv_normalized_curve,
    qq_data,
    ratio_experiment,
    ratio_series,
    symmetry_probe,
)
from .pipeline import TailScan, auto_schedule, tailscan

__all__ = [
    "ClassifierConfig", "DatasetVerdict", "HDCurve", "MRVSeries", "RatioSeries", "SandwichReport",
    "SymmetrySeries", "TailScan", "TailVerdict", "auto_schedule", "classify_dataset", "classify_direction",
    "convergence_curves", "depth_counts_along", "direction_label", "ellipse_pairs", "hd_curve",
    "marginal_upper_bound", "mrv_normalized_curve", "qq_data", "ratio_experiment", "ratio_series",
    "sandwich_check", "symmetry_probe", "tailscan", "transform_error", "trend",
]
