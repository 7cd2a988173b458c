"""
Threshold binary search for the ground-state energy.

The bracket starts at [-pi/2, pi/2]. Each step queries the ACDF at the
midpoint and compares it with eta/2. A hit means the first jump lies at or
below x + delta, so the upper end moves to x + 2/3 delta; a miss moves the
lower end to x - 2/3 delta. The search stops once the bracket is at most
2 delta wide and returns its midpoint divided by tau.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np

from schema import SearchConfig, SearchIterationRow
from sqpe.errors import ConvergenceError
from sqpe.estimator import AcdfEstimate

logger = logging.getLogger(__name__)

AcdfQuery = Callable[[float], Union[float, AcdfEstimate]]


@dataclass(frozen=True)
class SearchTrace:
    result: float
    x_star: float
    iterations: List[SearchIterationRow] = field(default_factory=list)

    @property
    def n_iters(self) -> int:
        return len(self.iterations)


def predicted_iterations(delta_band: float) -> int:
    """Iterations the width recursion w -> w/2 + 2/3 delta needs to get from pi to 2 delta."""
    if not delta_band > 0:
        raise ValueError(f"delta_band must be positive, got {delta_band}")
    width = math.pi
    count = 0
    while width > 2 * delta_band:
        width = width / 2 + 2 * delta_band / 3
        count += 1
    return count


def per_query_failure(success_probability: float, delta_band: float) -> float:
    """nu = (1 - success_probability) / N_iter, the union-bound share of each query."""
    if not 0.0 < success_probability < 1.0:
        raise ValueError(f"success_probability must lie in (0, 1), got {success_probability}")
    return (1.0 - success_probability) / max(1, predicted_iterations(delta_band))


def _unpack(result: Union[float, AcdfEstimate]) -> Tuple[float, float]:
    if isinstance(result, AcdfEstimate):
        return result.value, result.std_error
    return float(result), 0.0


def binary_search_gse(acdf_query: AcdfQuery, cfg: SearchConfig) -> SearchTrace:
    threshold = cfg.eta / 2
    shift = 2 * cfg.delta_band / 3
    x0, x1 = -math.pi / 2, math.pi / 2
    rows: List[SearchIterationRow] = []

    while x1 - x0 > 2 * cfg.delta_band:
        if len(rows) >= cfg.max_iters:
            raise ConvergenceError(
                f"Binary search did not converge within {cfg.max_iters} iterations "
                f"(bracket width {x1 - x0:.4g}, delta {cfg.delta_band:.4g})."
            )
        x = (x0 + x1) / 2
        value, std_error = _unpack(acdf_query(x))
        flag = int(value >= threshold)
        if flag:
            x1 = x + shift
        else:
            x0 = x - shift
        rows.append(
            SearchIterationRow(
                iteration=len(rows) + 1, x=x, estimate=value, std_error=std_error, flag=flag, x0=x0, x1=x1
            )
        )
        logger.info("Iteration %d: x=%.6f C=%.4f flag=%d bracket=[%.6f, %.6f]", len(rows), x, value, flag, x0, x1)

    x_star = (x0 + x1) / 2
    result = x_star / cfg.tau
    logger.info("Binary search finished after %d iterations: x*=%.6f, estimate %.6f", len(rows), x_star, result)
    return SearchTrace(result=result, x_star=x_star, iterations=rows)


def write_search_trace(rows: Sequence[SearchIterationRow], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = ["iteration", "x", "estimate", "std_error", "flag", "x0", "x1"]
    table = np.array([[getattr(row, name) for name in columns] for row in rows], dtype=float)
    np.savetxt(
        path,
        table.reshape(-1, len(columns)),
        delimiter=",",
        header=",".join(columns),
        comments="",
        fmt=["%d", "%.17g", "%.17g", "%.17g", "%d", "%.17g", "%.17g"],
    )
