"""
Choice of the runtime vector.

The family search walks r_j(c) = max(1, ceil(c t_j^2)) over a log-spaced grid
of c plus the all-ones vector, which reduces the integer problem to one
dimension. ``strategy="exhaustive"`` enumerates every vector in {1..max_r}^K.
``strategy="auto"`` enumerates whenever ``max_r`` is given and the lattice
holds at most ``MAX_EXHAUSTIVE_POINTS`` vectors, so small instances get the
exact optimum, and falls back to the family otherwise.
"""

from __future__ import annotations

import itertools
import logging
from pathlib import Path
from typing import Iterable, List, Literal, Optional, Sequence

import numpy as np

from schema import EstimatorConfig, TradeoffRow
from sqpe.compiler import DEFAULT_EPSILON_C
from sqpe.estimator import RuntimeVector
from sqpe.fourier import FourierSeries

from .cost_model import CostPoint, cost_point

logger = logging.getLogger(__name__)

Mode = Literal["min_total", "min_samples_bounded"]
Strategy = Literal["auto", "family", "exhaustive"]

C_GRID_SIZE = 64
C_GRID_BOUNDS = (0.2, 20.0)
DEFAULT_C = 2.0
DEFAULT_MAX_R = 6
MAX_EXHAUSTIVE_POINTS = 200_000


def c_grid() -> np.ndarray:
    """64 log-spaced scales spanning 0.1x to 10x the default c = 2, with 2 itself included."""
    grid = np.geomspace(*C_GRID_BOUNDS, C_GRID_SIZE)
    return np.unique(np.append(grid, DEFAULT_C))


def runtime_family(
    series: FourierSeries, tau_lambda: float, c: float, max_r: Optional[int] = None
) -> RuntimeVector:
    t = series.frequencies * tau_lambda
    r = np.maximum(1, np.ceil(c * t * t)).astype(int)
    if max_r is not None:
        r = np.minimum(r, max_r)
    return RuntimeVector.from_segments(series, tau_lambda, r)


def lattice_size(series: FourierSeries, max_r: int) -> int:
    return max_r ** len(series.frequencies)


def resolve_strategy(series: FourierSeries, strategy: Strategy, max_r: Optional[int]) -> str:
    if strategy != "auto":
        return strategy
    if max_r is not None and lattice_size(series, max_r) <= MAX_EXHAUSTIVE_POINTS:
        return "exhaustive"
    return "family"


def _family_points(
    series: FourierSeries, tau_lambda: float, cfg: EstimatorConfig, epsilon_c: float, max_r: Optional[int]
) -> List[CostPoint]:
    points = {}
    # c = 0 gives the all-ones vector, the cheapest one in gates
    for c in (0.0, *c_grid()):
        rv = runtime_family(series, tau_lambda, float(c), max_r)
        key = tuple(rv.r.tolist())
        if key not in points:
            points[key] = cost_point(series, rv, cfg, epsilon_c, c=float(c))
    return list(points.values())


def _lattice_points(
    series: FourierSeries, tau_lambda: float, cfg: EstimatorConfig, epsilon_c: float, max_r: int
) -> List[CostPoint]:
    size = lattice_size(series, max_r)
    if size > MAX_EXHAUSTIVE_POINTS:
        raise ValueError(f"Exhaustive search over {size} runtime vectors exceeds {MAX_EXHAUSTIVE_POINTS}.")
    return [
        cost_point(series, RuntimeVector.from_segments(series, tau_lambda, r), cfg, epsilon_c)
        for r in itertools.product(range(1, max_r + 1), repeat=len(series.frequencies))
    ]


def candidate_points(
    series: FourierSeries,
    tau_lambda: float,
    cfg: EstimatorConfig,
    strategy: Strategy = "auto",
    epsilon_c: float = DEFAULT_EPSILON_C,
    max_r: Optional[int] = None,
) -> List[CostPoint]:
    """Runtime vectors to choose from; ``max_r`` caps every r_j when given."""
    if max_r is not None and max_r < 1:
        raise ValueError(f"max_r must be at least 1, got {max_r}")
    resolved = resolve_strategy(series, strategy, max_r)
    if resolved == "family":
        return _family_points(series, tau_lambda, cfg, epsilon_c, max_r)
    if resolved == "exhaustive":
        return _lattice_points(series, tau_lambda, cfg, epsilon_c, max_r if max_r is not None else DEFAULT_MAX_R)
    raise ValueError(f"Unknown strategy {strategy!r}")


def _best(points: Iterable[CostPoint], mode: Mode, b_g: Optional[float]) -> Optional[CostPoint]:
    if mode == "min_total":
        return min(points, key=lambda point: point.product)
    if mode == "min_samples_bounded":
        if b_g is None or b_g < 1:
            raise ValueError(f"b_g must be at least 1 for bounded mode, got {b_g}")
        feasible = [point for point in points if point.n_g <= b_g]
        if not feasible:
            return None
        return min(feasible, key=lambda point: (point.n_s_scaled, point.n_g))
    raise ValueError(f"Unknown mode {mode!r}")


def optimize_runtime(
    series: FourierSeries,
    tau_lambda: float,
    cfg: EstimatorConfig,
    mode: Mode = "min_total",
    b_g: Optional[float] = None,
    strategy: Strategy = "auto",
    epsilon_c: float = DEFAULT_EPSILON_C,
    max_r: Optional[int] = None,
) -> CostPoint:
    points = candidate_points(series, tau_lambda, cfg, strategy, epsilon_c, max_r)
    best = _best(points, mode, b_g)
    if best is None:
        smallest = min(point.n_g for point in points)
        raise ValueError(f"b_g={b_g} is infeasible: the cheapest runtime vector needs N_g={smallest:.4g}.")
    logger.info(
        "Optimized runtime vector (%s, %s): N_g=%.3f, N_s/ln(1/nu)=%.1f, A=%.4f",
        mode,
        strategy,
        best.n_g,
        best.n_s_scaled,
        best.a_value,
    )
    return best


def tradeoff_curve(
    series: FourierSeries,
    tau_lambda: float,
    cfg: EstimatorConfig,
    b_g_grid: Sequence[float],
    strategy: Strategy = "auto",
    epsilon_c: float = DEFAULT_EPSILON_C,
    max_r: Optional[int] = None,
) -> List[TradeoffRow]:
    """One row per feasible b_g: the smallest sample count whose gate cost stays within b_g."""
    grid = list(b_g_grid)
    if any(later <= earlier for earlier, later in zip(grid, grid[1:])):
        raise ValueError("b_g grid must be strictly ascending.")
    points = candidate_points(series, tau_lambda, cfg, strategy, epsilon_c, max_r)
    rows: List[TradeoffRow] = []
    for b_g in grid:
        best = _best(points, "min_samples_bounded", b_g)
        if best is None:
            logger.debug("b_g=%.3f is below every candidate's gate cost; skipped.", b_g)
            continue
        c = best.c if best.c is not None else float("nan")
        rows.append(TradeoffRow(b_g=b_g, n_g=best.n_g, n_s_scaled=best.n_s_scaled, c=c))
    if not rows:
        raise ValueError("Every b_g in the grid is infeasible.")
    return rows


def write_tradeoff_csv(rows: Sequence[TradeoffRow], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = list(TradeoffRow.model_fields)
    table = np.array([[getattr(row, name) for name in columns] for row in rows], dtype=float)
    np.savetxt(path, table.reshape(-1, len(columns)), delimiter=",", header=",".join(columns), comments="", fmt="%.17g")
