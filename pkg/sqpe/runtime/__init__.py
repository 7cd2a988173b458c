"""Gate-cost model and runtime-vector optimization."""

from .cost_model import CostPoint, a_bound, cost_point, default_runtime, gate_cost, max_r_bound
from .optimizer import (
    c_grid,
    candidate_points,
    optimize_runtime,
    resolve_strategy,
    runtime_family,
    tradeoff_curve,
    write_tradeoff_csv,
)

__all__ = [
    "CostPoint",
    "a_bound",
    "cost_point",
    "default_runtime",
    "gate_cost",
    "max_r_bound",
    "c_grid",
    "candidate_points",
    "optimize_runtime",
    "resolve_strategy",
    "runtime_family",
    "tradeoff_curve",
    "write_tradeoff_csv",
]
