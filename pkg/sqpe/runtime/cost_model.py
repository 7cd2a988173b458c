from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from schema import EstimatorConfig
from sqpe.compiler import DEFAULT_EPSILON_C
from sqpe.estimator import RuntimeVector, mixture_weights, sample_count_scaled
from sqpe.fourier import FourierSeries


@dataclass(frozen=True)
class CostPoint:
    """Expected rotations per circuit ``n_g`` and sample count per ln(1/nu) ``n_s_scaled`` for one runtime vector."""

    rv: RuntimeVector
    n_g: float
    n_s_scaled: float
    a_value: float
    c: Optional[float] = None

    @property
    def product(self) -> float:
        return self.n_s_scaled * self.n_g


def gate_cost(series: FourierSeries, rv: RuntimeVector, epsilon_c: float = DEFAULT_EPSILON_C) -> float:
    """Mean of r_j under the frequency distribution |F_j| mu_j / A."""
    weights = mixture_weights(series, rv, epsilon_c)
    return float(np.sum(weights * rv.r) / weights.sum())


def default_runtime(series: FourierSeries, tau: float, lam: float) -> RuntimeVector:
    """r_j = ceil(2 t_j^2), at least 1."""
    tau_lambda = tau * lam
    t = series.frequencies * tau_lambda
    r = np.maximum(1, np.ceil(2.0 * t * t)).astype(int)
    return RuntimeVector.from_segments(series, tau_lambda, r)


def cost_point(
    series: FourierSeries,
    rv: RuntimeVector,
    cfg: EstimatorConfig,
    epsilon_c: float = DEFAULT_EPSILON_C,
    c: Optional[float] = None,
) -> CostPoint:
    weights = mixture_weights(series, rv, epsilon_c)
    a_value = float(weights.sum())
    return CostPoint(
        rv=rv,
        n_g=float(np.sum(weights * rv.r) / a_value),
        n_s_scaled=sample_count_scaled(a_value, cfg),
        a_value=a_value,
        c=c,
    )


def max_r_bound(d: int, tau_lambda: float) -> int:
    """2 ceil((2d + 1) lambda tau)^2, the largest r_j of the default runtime vector."""
    return 2 * math.ceil((2 * d + 1) * tau_lambda) ** 2


def a_bound(series: FourierSeries) -> float:
    """sqrt(e) times the positive-frequency weight, which bounds A for the default runtime vector."""
    return math.sqrt(math.e) * series.total_weight
