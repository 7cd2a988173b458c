"""Fourier approximation of the periodic Heaviside step."""

from .heaviside_series import (
    FourierParams,
    FourierSeries,
    band_error,
    band_grid,
    build_series,
    choose_params,
    coefficient_magnitudes,
    compute_beta,
    evaluate,
    global_grid,
    range_excess,
    smooth_heaviside,
    write_series_csv,
)
from .special_functions import lambert_w0, scaled_bessel_i

__all__ = [
    "FourierParams",
    "FourierSeries",
    "band_error",
    "band_grid",
    "build_series",
    "choose_params",
    "coefficient_magnitudes",
    "compute_beta",
    "evaluate",
    "global_grid",
    "range_excess",
    "smooth_heaviside",
    "write_series_csv",
    "lambert_w0",
    "scaled_bessel_i",
]
