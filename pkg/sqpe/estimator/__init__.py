"""Symmetry-reduced Monte-Carlo estimator of the approximate CDF."""

from .acdf_estimator import (
    AcdfEstimate,
    AcdfSampleSet,
    RuntimeVector,
    acdf_closed_form,
    check_halving,
    collect_samples,
    compute_a,
    estimate_at,
    legacy_a,
    legacy_sample_count,
    mixture_weights,
    sample_count,
    sample_count_scaled,
    sample_stream,
    segment_normalizations,
)
from .persistence import read_sample_set, write_acdf_sweep, write_sample_set

__all__ = [
    "AcdfEstimate",
    "AcdfSampleSet",
    "RuntimeVector",
    "acdf_closed_form",
    "check_halving",
    "collect_samples",
    "compute_a",
    "estimate_at",
    "legacy_a",
    "legacy_sample_count",
    "mixture_weights",
    "sample_count",
    "sample_count_scaled",
    "sample_stream",
    "segment_normalizations",
    "read_sample_set",
    "write_acdf_sweep",
    "write_sample_set",
]
