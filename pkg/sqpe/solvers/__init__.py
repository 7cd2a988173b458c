"""Ground-state energy searches over the approximate CDF."""

from .binary_search import (
    SearchTrace,
    binary_search_gse,
    per_query_failure,
    predicted_iterations,
    write_search_trace,
)
from .changepoint import (
    changepoint_gse,
    default_grid,
    single_changepoint,
    total_deviation,
    write_changepoint_trace,
)

__all__ = [
    "SearchTrace",
    "binary_search_gse",
    "per_query_failure",
    "predicted_iterations",
    "write_search_trace",
    "changepoint_gse",
    "default_grid",
    "single_changepoint",
    "total_deviation",
    "write_changepoint_trace",
]
