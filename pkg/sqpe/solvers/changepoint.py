"""
Ground-state energy from the first significant mean shift of an ACDF sampled on a grid.

Indices in this module are 1-based and inclusive, like the segments Y_{m:n}
they describe. A split ``m`` puts elements 1..m in the left segment.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np

from schema import ChangepointConfig, ChangepointPassRow
from sqpe.errors import ConvergenceError

logger = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-12


def default_grid(resolution: float) -> List[float]:
    """x_k = -pi/2 + (k - 1) resolution for k = 1 .. floor(pi / resolution) + 1."""
    if not 0.0 < resolution <= math.pi:
        raise ValueError(f"resolution must lie in (0, pi], got {resolution}")
    count = int(math.floor(math.pi / resolution)) + 1
    return [-math.pi / 2 + k * resolution for k in range(count)]


def _prefix_sums(y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return np.concatenate([[0.0], np.cumsum(y)]), np.concatenate([[0.0], np.cumsum(y * y)])


def _deviation(sums: np.ndarray, squares: np.ndarray, m, n):
    """V over 1-based inclusive [m, n]; m and n may be arrays."""
    length = n - m + 1
    total = sums[n] - sums[m - 1]
    value = squares[n] - squares[m - 1] - total * total / length
    return np.maximum(value, 0.0)


def total_deviation(y: Sequence[float], m: int, n: int) -> float:
    """Sum of squared deviations from the mean over y_m .. y_n."""
    values = np.asarray(y, dtype=float)
    if not 1 <= m <= n <= values.size:
        raise ValueError(f"Segment [{m}, {n}] is outside 1..{values.size}")
    segment = values[m - 1 : n]
    return float(np.sum((segment - segment.mean()) ** 2))


def _split_costs(values: np.ndarray) -> np.ndarray:
    sums, squares = _prefix_sums(values)
    length = values.size
    splits = np.arange(1, length)
    return _deviation(sums, squares, 1, splits) + _deviation(sums, squares, splits + 1, length)


def single_changepoint(y: Sequence[float]) -> int:
    """Leftmost split m minimizing V(Y_{1:m}) + V(Y_{m+1:M})."""
    values = np.asarray(y, dtype=float)
    if values.size < 2:
        raise ValueError(f"Need at least 2 values to place a changepoint, got {values.size}")
    costs = _split_costs(values)
    scale = max(1.0, float(np.sum(values * values)))
    return int(np.flatnonzero(costs <= costs.min() + TIE_TOLERANCE * scale)[0]) + 1


def _deviation_drop(values: np.ndarray, split: int) -> float:
    length = values.size
    return total_deviation(values, 1, length) - (
        total_deviation(values, 1, split) + total_deviation(values, split + 1, length)
    )


def changepoint_gse(
    y: Sequence[float], cfg: ChangepointConfig, tau: float
) -> Tuple[float, List[ChangepointPassRow]]:
    """
    Split the whole sequence, then keep splitting the left segment while the
    drop in total deviation exceeds ``delta_c``. Returns the midpoint of the
    two grid cells around the last significant split, divided by tau.
    """
    values = np.asarray(y, dtype=float)
    grid = np.asarray(cfg.grid, dtype=float)
    if values.size != grid.size:
        raise ValueError(f"ACDF values ({values.size}) are not aligned with the grid ({grid.size}).")
    if values.size < 3:
        raise ValueError("Changepoint detection needs at least 3 grid points.")
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")

    trace: List[ChangepointPassRow] = []
    accepted = 0
    segment = values
    while segment.size >= 2:
        split = single_changepoint(segment)
        drop = _deviation_drop(segment, split)
        significant = drop > cfg.delta_c
        trace.append(
            ChangepointPassRow(
                pass_index=len(trace) + 1, split_index=split, deviation_drop=drop, significant=significant
            )
        )
        logger.info("Changepoint pass %d: split after %d, deviation drop %.5f", len(trace), split, drop)
        if not significant:
            break
        accepted = split
        segment = segment[:split]

    if not accepted:
        raise ConvergenceError(
            f"No significant changepoint: deviation drop {trace[0].deviation_drop:.4g} <= delta_c {cfg.delta_c}"
        )
    # the new segment starts at 1-based index accepted + 1, i.e. grid[accepted]
    gse = (grid[accepted] + grid[accepted - 1]) / (2 * tau)
    return float(gse), trace


def write_changepoint_trace(trace: Sequence[ChangepointPassRow], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    table = np.array(
        [[row.pass_index, row.split_index, row.deviation_drop, int(row.significant)] for row in trace], dtype=float
    )
    np.savetxt(
        path,
        table.reshape(-1, 4),
        delimiter=",",
        header="pass,split_index,deviation_drop,significant",
        comments="",
        fmt=["%d", "%d", "%.17g", "%d"],
    )
