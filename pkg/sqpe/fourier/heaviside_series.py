"""
Damped Fourier series of the 2pi-periodic Heaviside step.

Only the odd positive frequencies k = 2j + 1, 0 <= j <= d, are stored, as
magnitudes |F_k|. The complex coefficients follow from F_0 = 1/2,
F_k = -i |F_k| for k > 0 and F_{-k} = -F_k, so the series is real:

    F(x) = 1/2 + 2 * sum_k |F_k| sin(k x)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Union

import numpy as np
from scipy.special import erf

from .special_functions import lambert_w0, scaled_bessel_i

logger = logging.getLogger(__name__)

DROP_THRESHOLD = 1e-300
BAND_GRID_POINTS = 10_000
MAX_ORDER = 1 << 16

FloatOrArray = Union[float, np.ndarray]


@dataclass(frozen=True)
class FourierParams:
    epsilon: float
    delta_band: float
    d: int
    beta: float

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if not 0.0 < self.delta_band < math.pi / 2:
            raise ValueError(f"delta_band must lie in (0, pi/2), got {self.delta_band}")
        if self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d}")
        if not self.beta >= 1.0:
            raise ValueError(f"beta must be >= 1, got {self.beta}")


@dataclass(frozen=True)
class FourierSeries:
    params: FourierParams
    coeffs: Dict[int, float]
    f0: float = 0.5
    _frequencies: np.ndarray = field(init=False, repr=False, compare=False)
    _magnitudes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        frequencies = np.array(sorted(self.coeffs), dtype=int)
        magnitudes = np.array([self.coeffs[k] for k in frequencies], dtype=float)
        if np.any(frequencies % 2 == 0) or np.any(frequencies < 1):
            raise ValueError("Fourier frequencies must be odd positive integers.")
        if np.any(magnitudes <= 0):
            raise ValueError("Fourier magnitudes must be positive.")
        frequencies.setflags(write=False)
        magnitudes.setflags(write=False)
        object.__setattr__(self, "_frequencies", frequencies)
        object.__setattr__(self, "_magnitudes", magnitudes)

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def frequencies(self) -> np.ndarray:
        """Odd positive k in ascending order."""
        return self._frequencies

    @property
    def magnitudes(self) -> np.ndarray:
        """|F_k| aligned with :attr:`frequencies`."""
        return self._magnitudes

    @property
    def total_weight(self) -> float:
        """Sum of |F_k| over positive frequencies."""
        return float(self._magnitudes.sum())

    def coefficient(self, k: int) -> complex:
        if k == 0:
            return complex(self.f0)
        magnitude = self.coeffs.get(abs(k), 0.0)
        return complex(0.0, -magnitude if k > 0 else magnitude)


def compute_beta(epsilon: float, delta_band: float) -> float:
    return max(lambert_w0(3.0 / (math.pi * epsilon**2)) / (4.0 * math.sin(delta_band) ** 2), 1.0)


def coefficient_magnitudes(d: int, beta: float) -> np.ndarray:
    """|F_{2j+1}| for j = 0..d; the last one keeps only the I_d term."""
    bessel = scaled_bessel_i(np.arange(d + 2), beta)
    j = np.arange(d + 1)
    pair_sum = bessel[: d + 1] + bessel[1 : d + 2]
    pair_sum[d] = bessel[d]
    return math.sqrt(beta / (2.0 * math.pi)) * pair_sum / (2 * j + 1)


def build_series(params: FourierParams) -> FourierSeries:
    magnitudes = coefficient_magnitudes(params.d, params.beta)
    keep = magnitudes >= DROP_THRESHOLD
    dropped = int((~keep).sum())
    if dropped:
        logger.info("Dropped %d Fourier coefficients below %.0e", dropped, DROP_THRESHOLD)
    coeffs = {2 * j + 1: float(magnitudes[j]) for j in np.flatnonzero(keep)}
    series = FourierSeries(params=params, coeffs=coeffs)
    logger.debug(
        "Fourier series d=%d beta=%.4f: sum |F_k| over all frequencies = %.6f",
        params.d,
        params.beta,
        0.5 + 2.0 * series.total_weight,
    )
    return series


def evaluate(series: FourierSeries, x: FloatOrArray) -> FloatOrArray:
    points = np.asarray(x, dtype=float)
    phases = np.multiply.outer(points, series.frequencies)
    values = series.f0 + 2.0 * np.sin(phases) @ series.magnitudes
    if points.ndim == 0:
        return float(values)
    return values


def smooth_heaviside(beta: float, x: FloatOrArray) -> FloatOrArray:
    """Untruncated damped series, 1/2 (1 + erf(sqrt(2 beta) sin x))."""
    values = 0.5 * (1.0 + erf(math.sqrt(2.0 * beta) * np.sin(x)))
    if np.ndim(values) == 0:
        return float(values)
    return values


def band_grid(delta_band: float, n_points: int = BAND_GRID_POINTS) -> np.ndarray:
    """Points of [delta, pi - delta] followed by their mirror images in [-pi + delta, -delta]."""
    half = np.linspace(delta_band, math.pi - delta_band, n_points // 2)
    return np.concatenate([half, -half])


def global_grid(n_points: int = BAND_GRID_POINTS) -> np.ndarray:
    return np.linspace(-math.pi, math.pi, n_points)


def band_error(series: FourierSeries, n_points: int = BAND_GRID_POINTS) -> float:
    """Largest |Theta(x) - F(x)| over the band grid."""
    grid = band_grid(series.params.delta_band, n_points)
    target = (grid > 0).astype(float)
    return float(np.max(np.abs(evaluate(series, grid) - target)))


def range_excess(series: FourierSeries, n_points: int = BAND_GRID_POINTS) -> float:
    """How far F leaves [0, 1] on a global grid (0 when it stays inside)."""
    values = evaluate(series, global_grid(n_points))
    return float(max(0.0, -values.min(), values.max() - 1.0))


def _acceptable(epsilon: float, delta_band: float, beta: float, d: int) -> bool:
    series = build_series(FourierParams(epsilon=epsilon, delta_band=delta_band, d=d, beta=beta))
    return band_error(series) <= epsilon and range_excess(series) <= epsilon


def choose_params(epsilon: float, delta_band: float) -> FourierParams:
    """
    beta from the Lambert-W rule, then the smallest d whose measured band error
    (and excursion outside [0, 1]) stays within epsilon: double d until it
    passes, then bisect down.
    """
    if not 0.0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    if not 0.0 < delta_band < math.pi / 2:
        raise ValueError(f"delta_band must lie in (0, pi/2), got {delta_band}")
    beta = compute_beta(epsilon, delta_band)

    high = 1
    while not _acceptable(epsilon, delta_band, beta, high):
        if high >= MAX_ORDER:
            raise ValueError(
                f"No truncation order up to {MAX_ORDER} reaches epsilon={epsilon} for delta_band={delta_band}."
            )
        high *= 2
    low = high // 2
    while high - low > 1:
        middle = (low + high) // 2
        if _acceptable(epsilon, delta_band, beta, middle):
            high = middle
        else:
            low = middle
    logger.info("Chose Fourier parameters d=%d beta=%.4f for epsilon=%g delta=%g", high, beta, epsilon, delta_band)
    return FourierParams(epsilon=epsilon, delta_band=delta_band, d=high, beta=beta)


def write_series_csv(series: FourierSeries, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    table = np.column_stack([series.frequencies, series.magnitudes])
    np.savetxt(path, table, delimiter=",", header="k,abs_F_k", comments="", fmt=["%d", "%.17g"])
