"""Fourier approximation of the periodic Heaviside step."""

import math
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import ive

PROJECT_ROOT = Path(__file__).resolve().parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from sqpe.fourier import (  # noqa: E402
    FourierParams,
    band_error,
    band_grid,
    build_series,
    choose_params,
    coefficient_magnitudes,
    compute_beta,
    evaluate,
    global_grid,
    lambert_w0,
    range_excess,
    scaled_bessel_i,
    smooth_heaviside,
    write_series_csv,
)


def test_lambert_w0():
    assert lambert_w0(0.0) == 0.0
    assert lambert_w0(math.e) == pytest.approx(1.0)
    w = lambert_w0(95.0)
    assert w * math.exp(w) == pytest.approx(95.0)
    for bad in (-0.1, float("inf")):
        with pytest.raises(ValueError):
            lambert_w0(bad)


def test_scaled_bessel_i():
    assert scaled_bessel_i(0, 1.0) == pytest.approx(ive(0, 1.0))
    np.testing.assert_allclose(scaled_bessel_i(np.arange(4), 7.5), ive(np.arange(4), 7.5))
    with pytest.raises(ValueError):
        scaled_bessel_i(-1, 1.0)
    with pytest.raises(ValueError):
        scaled_bessel_i(np.array([0.5]), 1.0)
    with pytest.raises(ValueError):
        scaled_bessel_i(1, 0.0)


def test_beta_rule():
    beta = compute_beta(0.1, 0.2)
    expected = lambert_w0(3.0 / (math.pi * 0.01)) / (4.0 * math.sin(0.2) ** 2)
    assert beta == pytest.approx(expected)
    # wide bands clamp at 1
    assert compute_beta(0.45, 1.5) == 1.0


def test_params_validation():
    with pytest.raises(ValueError):
        FourierParams(epsilon=0.6, delta_band=0.1, d=3, beta=2.0)
    with pytest.raises(ValueError):
        FourierParams(epsilon=0.1, delta_band=2.0, d=3, beta=2.0)
    with pytest.raises(ValueError):
        FourierParams(epsilon=0.1, delta_band=0.1, d=0, beta=2.0)
    with pytest.raises(ValueError):
        FourierParams(epsilon=0.1, delta_band=0.1, d=3, beta=0.5)


def test_boundary_coefficient_keeps_only_the_last_bessel_term():
    beta = 3.0
    magnitudes = coefficient_magnitudes(4, beta)
    scale = math.sqrt(beta / (2 * math.pi))
    assert magnitudes[0] == pytest.approx(scale * (ive(0, beta) + ive(1, beta)))
    assert magnitudes[2] == pytest.approx(scale * (ive(2, beta) + ive(3, beta)) / 5)
    assert magnitudes[4] == pytest.approx(scale * ive(4, beta) / 9)


def test_coefficients_match_quadrature_of_the_damped_construction():
    d, beta = 3, 5.0
    magnitudes = coefficient_magnitudes(d, beta)

    def heaviside_sine(k):
        value, _ = quad(
            lambda x: smooth_heaviside(beta, x) * math.sin(k * x), -math.pi, math.pi, limit=200, epsabs=1e-13
        )
        return value / (2 * math.pi)

    def kernel_cosine(n):
        # n-th cosine coefficient of exp(beta (cos 2x - 1))
        value, _ = quad(
            lambda x: math.exp(beta * (math.cos(2 * x) - 1.0)) * math.cos(2 * n * x),
            -math.pi,
            math.pi,
            limit=200,
            epsabs=1e-13,
        )
        return value / (2 * math.pi)

    for j in range(d):
        assert magnitudes[j] == pytest.approx(heaviside_sine(2 * j + 1), abs=1e-8)

    # the derivative sqrt(2 beta / pi) cos x exp(beta (cos 2x - 1)) is cut at |n| <= d,
    # so the top frequency only sees the n = d cosine term
    k = 2 * d + 1
    scale = math.sqrt(2 * beta / math.pi) / (2 * k)
    assert magnitudes[d] == pytest.approx(scale * kernel_cosine(d), abs=1e-8)
    assert heaviside_sine(k) - magnitudes[d] == pytest.approx(scale * kernel_cosine(d + 1), abs=1e-8)


def test_series_is_periodic_and_antisymmetric_under_a_half_turn():
    series = build_series(FourierParams(epsilon=0.1, delta_band=0.2, d=9, beta=12.0))
    x = np.linspace(-math.pi, math.pi, 257)
    values = evaluate(series, x)
    for turns in (-2, -1, 1, 3):
        np.testing.assert_allclose(evaluate(series, x + 2 * math.pi * turns), values, atol=1e-10)
    np.testing.assert_allclose(evaluate(series, x + math.pi), 1.0 - values, atol=1e-10)


def test_series_symmetries():
    series = build_series(FourierParams(epsilon=0.1, delta_band=0.2, d=12, beta=15.0))
    assert series.d == 12
    np.testing.assert_array_equal(series.frequencies, np.arange(1, 26, 2))
    assert series.coefficient(0) == 0.5
    assert series.coefficient(2) == 0
    assert series.coefficient(3) == -series.coefficient(-3)
    assert series.coefficient(3).real == 0.0 and series.coefficient(3).imag < 0
    x = np.linspace(-3.0, 3.0, 41)
    np.testing.assert_allclose(evaluate(series, x) + evaluate(series, -x), 1.0, atol=1e-12)
    assert evaluate(series, 0.0) == pytest.approx(0.5)


def test_large_order_series_reaches_the_closed_form():
    beta = 4.0
    series = build_series(FourierParams(epsilon=0.1, delta_band=0.5, d=60, beta=beta))
    x = global_grid(501)
    np.testing.assert_allclose(evaluate(series, x), smooth_heaviside(beta, x), atol=1e-10)


def test_band_grid_covers_both_sides():
    grid = band_grid(0.3, n_points=100)
    assert grid.size == 100
    assert grid[:50].min() == pytest.approx(0.3)
    assert grid[:50].max() == pytest.approx(math.pi - 0.3)
    np.testing.assert_allclose(grid[50:], -grid[:50])


@pytest.mark.parametrize("epsilon, delta_band", [(0.1, 0.2), (0.05, 0.1), (0.01, 0.05)])
def test_chosen_series_meets_the_band_error(epsilon, delta_band):
    params = choose_params(epsilon, delta_band)
    series = build_series(params)
    assert band_error(series) <= epsilon
    assert range_excess(series) <= epsilon
    if params.d > 1:
        # one order less must fail
        smaller = build_series(FourierParams(epsilon=epsilon, delta_band=delta_band, d=params.d - 1, beta=params.beta))
        assert band_error(smaller) > epsilon or range_excess(smaller) > epsilon


def test_tighter_targets_need_more_terms():
    loose = choose_params(0.1, 0.2)
    tight = choose_params(0.01, 0.05)
    assert tight.d > loose.d
    assert tight.beta > loose.beta


def test_choose_params_validation():
    with pytest.raises(ValueError):
        choose_params(0.5, 0.1)
    with pytest.raises(ValueError):
        choose_params(0.1, 0.0)


def test_series_csv(tmp_path):
    series = build_series(FourierParams(epsilon=0.1, delta_band=0.2, d=5, beta=6.0))
    path = tmp_path / "series.csv"
    write_series_csv(series, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "k,abs_F_k"
    assert len(lines) == 7
    assert lines[1].startswith("1,")
