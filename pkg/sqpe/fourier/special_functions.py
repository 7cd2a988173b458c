from __future__ import annotations

import math
from typing import Union

import numpy as np
from scipy.special import ive, lambertw

ArrayLike = Union[int, np.ndarray]


def lambert_w0(x: float) -> float:
    """Principal branch W0 for x >= 0."""
    if not math.isfinite(x) or x < 0:
        raise ValueError(f"lambert_w0 expects a finite x >= 0, got {x}")
    return float(lambertw(x, 0).real)


def scaled_bessel_i(n: ArrayLike, beta: float) -> Union[float, np.ndarray]:
    """e^{-beta} I_n(beta); accepts an integer order or an array of orders."""
    orders = np.asarray(n)
    if not np.issubdtype(orders.dtype, np.integer) or np.any(orders < 0):
        raise ValueError(f"Bessel order must be a non-negative integer, got {n}")
    if not (math.isfinite(beta) and beta > 0):
        raise ValueError(f"beta must be positive and finite, got {beta}")
    values = ive(orders, beta)
    if orders.ndim == 0:
        return float(values)
    return values
