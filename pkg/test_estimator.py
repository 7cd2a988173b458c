"""ACDF estimator: mixture weights, sample counts, sampling and persistence."""

import logging
import math
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.stats import chisquare

PROJECT_ROOT = Path(__file__).resolve().parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from schema import EstimatorConfig  # noqa: E402
from sqpe.compiler import CompilationConfig, sample_unitary  # noqa: E402
from sqpe.estimator import (  # noqa: E402
    AcdfSampleSet,
    RuntimeVector,
    acdf_closed_form,
    check_halving,
    collect_samples,
    compute_a,
    estimate_at,
    legacy_a,
    legacy_sample_count,
    mixture_weights,
    read_sample_set,
    sample_count,
    sample_stream,
    segment_normalizations,
    write_sample_set,
)
from sqpe.fourier import FourierParams, build_series, choose_params, evaluate  # noqa: E402
from sqpe.pauli import PauliTerm, normalize_hamiltonian  # noqa: E402
from sqpe.runtime import default_runtime, gate_cost  # noqa: E402
from sqpe.statevector import SpectralReference, diagonalize, expectation, make_trial_state  # noqa: E402

CASE1 = EstimatorConfig(eta=0.25, epsilon=0.1, nu=0.1)


def small_problem(delta_precision=0.5, eta=0.5, epsilon=0.2, shot_mode="single_shot"):
    terms = [PauliTerm.from_label(0.3, "XZ"), PauliTerm.from_label(-0.2, "ZI"), PauliTerm.from_label(0.1, "IY")]
    h = normalize_hamiltonian(terms, delta_precision)
    spectrum = diagonalize(h)
    state = make_trial_state(spectrum, eta, seed=3)
    series = build_series(choose_params(epsilon, h.tau * delta_precision))
    rv = default_runtime(series, h.tau, h.lam)
    cfg = EstimatorConfig(eta=eta, epsilon=epsilon, nu=0.1, shot_mode=shot_mode)
    return h, spectrum, state, series, rv, cfg


def test_estimator_config_requires_a_margin():
    assert CASE1.margin == pytest.approx(0.025)
    with pytest.raises(ValueError):
        EstimatorConfig(eta=0.2, epsilon=0.1, nu=0.1)
    with pytest.raises(ValueError):
        EstimatorConfig(eta=0.5, epsilon=0.1, nu=1.0)


def test_runtime_vector_times_follow_the_frequencies():
    series = build_series(FourierParams(epsilon=0.1, delta_band=0.2, d=3, beta=5.0))
    rv = RuntimeVector.from_segments(series, 0.4, [1, 2, 3, 4])
    np.testing.assert_allclose(rv.t, [-0.4, -1.2, -2.0, -2.8])
    assert len(rv) == 4
    with pytest.raises(ValueError):
        RuntimeVector.from_segments(series, 0.4, [1, 0, 3, 4])
    with pytest.raises(ValueError):
        RuntimeVector.from_segments(series, 0.4, [1, 2])


def test_mixture_weights_use_segment_normalizations():
    series = build_series(FourierParams(epsilon=0.1, delta_band=0.2, d=4, beta=8.0))
    rv = default_runtime(series, tau=0.9, lam=1.2)
    c = segment_normalizations(rv)
    np.testing.assert_allclose(mixture_weights(series, rv), series.magnitudes * c**rv.r)
    assert compute_a(series, rv) == pytest.approx(float(np.sum(series.magnitudes * c**rv.r)))
    other = build_series(FourierParams(epsilon=0.1, delta_band=0.2, d=5, beta=8.0))
    with pytest.raises(ValueError):
        mixture_weights(other, rv)


def test_full_spectrum_weight_is_twice_plus_a_half():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        d = int(rng.integers(1, 30))
        beta = float(rng.uniform(1.0, 60.0))
        tau_lambda = float(rng.uniform(0.05, 1.5))
        series = build_series(FourierParams(epsilon=0.1, delta_band=0.2, d=d, beta=beta))
        rv = default_runtime(series, tau=tau_lambda, lam=1.0)
        a_value = compute_a(series, rv)
        a_old = legacy_a(series, rv)
        assert abs(a_old - (2 * a_value + 0.5)) <= 1e-9
        n_s = sample_count(a_value, CASE1)
        n_old = legacy_sample_count(a_old, CASE1)
        assert n_s < n_old / 2
        assert check_halving(n_s, n_old)


def test_sample_count_formula():
    a_value = 0.9
    expected = math.ceil(8 * (a_value / CASE1.margin) ** 2 * math.log(1 / CASE1.nu))
    assert sample_count(a_value, CASE1) == expected
    wide = EstimatorConfig(eta=1.0, epsilon=0.1, nu=0.1)
    narrow = EstimatorConfig(eta=0.5, epsilon=0.1, nu=0.1)
    assert sample_count(a_value, wide) < sample_count(a_value, narrow)


def test_sample_count_clamps_and_halving_warns(caplog):
    with caplog.at_level(logging.WARNING):
        assert sample_count(0.0, CASE1) == 1
        assert not check_halving(10, 15)
    messages = [record.getMessage() for record in caplog.records]
    assert any("using 1 sample" in message for message in messages)
    assert any("not below half" in message for message in messages)


def test_sample_streams_are_reproducible_and_independent():
    first = sample_stream(5, 0).random(4)
    np.testing.assert_array_equal(first, sample_stream(5, 0).random(4))
    assert not np.allclose(first, sample_stream(5, 1).random(4))
    assert not np.allclose(first, sample_stream(6, 0).random(4))


def test_estimate_from_a_fixed_sample_set():
    samples = AcdfSampleSet(
        j=[1], z_re=[1.0], z_im=[0.0], rotation_counts=[1], a_value=0.5, seed=0
    )
    estimate = estimate_at(samples, math.pi / 2)
    assert estimate.value == pytest.approx(1.5)
    assert estimate.std_error == 0.0
    assert samples.records == [(1, 1.0, 0.0)]

    pair = AcdfSampleSet(j=[1, 3], z_re=[1.0, -1.0], z_im=[1.0, 1.0], rotation_counts=[1, 2], a_value=0.5, seed=0)
    x = 0.3
    gamma = np.array([math.sin(x) + math.cos(x), -math.sin(3 * x) + math.cos(3 * x)])
    estimate = estimate_at(pair, x)
    assert estimate.value == pytest.approx(0.5 + gamma.mean())
    assert estimate.std_error == pytest.approx(gamma.std(ddof=1) / math.sqrt(2))

    empty = AcdfSampleSet(j=[], z_re=[], z_im=[], rotation_counts=[], a_value=0.5, seed=0)
    with pytest.raises(ValueError):
        estimate_at(empty, 0.0)


def test_collect_samples_validation():
    h, _, state, series, rv, cfg = small_problem()
    with pytest.raises(ValueError):
        collect_samples(h, state, series, rv, cfg, n_samples=0, seed=0)
    with pytest.raises(ValueError):
        collect_samples(h, state, series, rv, cfg, n_samples=5, seed=0, threads=0)


def test_results_do_not_depend_on_the_thread_count():
    h, _, state, series, rv, cfg = small_problem()
    serial = collect_samples(h, state, series, rv, cfg, n_samples=40, seed=9, threads=1)
    parallel = collect_samples(h, state, series, rv, cfg, n_samples=40, seed=9, threads=3)
    np.testing.assert_array_equal(serial.j, parallel.j)
    np.testing.assert_array_equal(serial.z_re, parallel.z_re)
    np.testing.assert_array_equal(serial.z_im, parallel.z_im)
    assert set(np.unique(serial.z_re)) <= {-1.0, 1.0}
    assert set(serial.j.tolist()) <= set(series.frequencies.tolist())
    assert serial.a_value == pytest.approx(compute_a(series, rv))


def test_collected_records_replay_from_their_streams():
    h, _, state, series, rv, cfg = small_problem()
    seed = 21
    samples = collect_samples(h, state, series, rv, cfg, n_samples=60, seed=seed)
    weights = mixture_weights(series, rv)
    probabilities = weights / weights.sum()
    for index in range(samples.count):
        rng = sample_stream(seed, index)
        choice = int(rng.choice(len(weights), p=probabilities))
        config = CompilationConfig(t=float(rv.t[choice]), r=int(rv.r[choice]), hamiltonian=h)
        u = sample_unitary(config, rng)
        value = u.phase.value * expectation(state, u)
        assert samples.j[index] == rv.frequencies[choice]
        assert samples.rotation_counts[index] == u.rotation_count
        assert samples.z_re[index] == (1.0 if rng.random() < 0.5 * (1.0 + value.real) else -1.0)
        assert samples.z_im[index] == (1.0 if rng.random() < 0.5 * (1.0 + value.imag) else -1.0)


def test_single_shots_match_exact_values_on_average_with_more_spread():
    h, _, state, series, rv, shot_cfg = small_problem()
    exact_cfg = shot_cfg.model_copy(update={"shot_mode": "exact"})
    n_samples = 4000
    shots = collect_samples(h, state, series, rv, shot_cfg, n_samples=n_samples, seed=8)
    exact = collect_samples(h, state, series, rv, exact_cfg, n_samples=n_samples, seed=8)
    np.testing.assert_array_equal(shots.j, exact.j)
    for shot, value in ((shots.z_re, exact.z_re), (shots.z_im, exact.z_im)):
        difference = shot - value
        assert abs(difference.mean()) <= 5 * difference.std(ddof=1) / math.sqrt(n_samples)
        # E[(shot - value)^2 | value] = 1 - value^2
        excess = difference**2 - (1.0 - value**2)
        assert abs(excess.mean()) <= 5 * excess.std(ddof=1) / math.sqrt(n_samples)
        assert shot.var() > value.var()
    for x in (-0.6, 0.0, 0.5):
        assert estimate_at(shots, x).std_error > estimate_at(exact, x).std_error


def test_estimates_replay_bit_for_bit_from_the_records():
    h, _, state, series, rv, cfg = small_problem()
    samples = collect_samples(h, state, series, rv, cfg, n_samples=200, seed=6)
    j, z_re, z_im = (np.array(column) for column in zip(*samples.records))
    for x in (-1.2, -0.3, 0.0, 0.9):
        gamma = np.sin(j * x) * z_re + np.cos(j * x) * z_im
        assert estimate_at(samples, x).value == 0.5 + 2.0 * samples.a_value * float(gamma.mean())


def test_exact_mode_estimate_matches_the_closed_form():
    h, spectrum, state, series, rv, cfg = small_problem(shot_mode="exact")
    samples = collect_samples(h, state, series, rv, cfg, n_samples=3000, seed=4)
    reference = spectrum.reference(state)
    for x in (-0.8, -0.2, 0.0, 0.4):
        estimate = estimate_at(samples, x)
        expected = acdf_closed_form(reference, series, h.tau, x)
        assert abs(estimate.value - expected) <= 5 * estimate.std_error + 1e-9


def test_closed_form_is_a_mixture_of_shifted_series():
    series = build_series(FourierParams(epsilon=0.1, delta_band=0.2, d=10, beta=12.0))
    reference = SpectralReference(eigenvalues=np.array([-1.0, 0.5]), overlaps=np.array([0.3, 0.7]))
    x = np.array([-0.9, 0.0, 0.7])
    expected = 0.3 * evaluate(series, x + 0.8) + 0.7 * evaluate(series, x - 0.4)
    np.testing.assert_allclose(acdf_closed_form(reference, series, 0.8, x), expected)
    assert acdf_closed_form(reference, series, 0.8, 0.0) == pytest.approx(expected[1])


def test_gate_cost_matches_sampled_rotation_counts():
    h, _, state, series, rv, cfg = small_problem()
    samples = collect_samples(h, state, series, rv, cfg, n_samples=1500, seed=12)
    weights = mixture_weights(series, rv)
    probabilities = weights / weights.sum()
    expected = gate_cost(series, rv)
    sigma = math.sqrt(float(np.dot(probabilities, (rv.r - expected) ** 2)) / samples.count)
    assert abs(samples.rotation_counts.mean() - expected) <= 4 * sigma + 1e-12


def test_sample_set_file(tmp_path):
    h, _, state, series, rv, cfg = small_problem()
    samples = collect_samples(h, state, series, rv, cfg, n_samples=12, seed=1)
    path = tmp_path / "samples.csv"
    write_sample_set(samples, path, config_hash="abc123")
    text = path.read_text().splitlines()
    assert text[3] == "# config_hash=abc123"
    assert text[4] == "n,j,z_re,z_im,rotations"
    loaded = read_sample_set(path)
    np.testing.assert_array_equal(loaded.j, samples.j)
    np.testing.assert_array_equal(loaded.z_re, samples.z_re)
    assert loaded.a_value == samples.a_value
    assert loaded.seed == 1
    assert estimate_at(loaded, 0.2).value == pytest.approx(estimate_at(samples, 0.2).value)
    with pytest.raises(FileNotFoundError):
        read_sample_set(tmp_path / "missing.csv")


@pytest.mark.slow
def test_threshold_test_respects_the_failure_probability():
    """Point spectrum at 0, so every overlap is 1 and mu_j = 1; the threshold test is run on planted points."""
    eta, epsilon, nu = 0.5, 0.2, 0.1
    cfg = EstimatorConfig(eta=eta, epsilon=epsilon, nu=nu)
    series = build_series(choose_params(epsilon, 0.3))
    a_value = series.total_weight
    n_samples = sample_count(a_value, cfg)
    probabilities = series.magnitudes / a_value
    rng = np.random.default_rng(77)
    repetitions = 500

    low = brentq(lambda y: evaluate(series, y) - epsilon, -math.pi / 2, 0.0)
    high = brentq(lambda y: evaluate(series, y) - (eta - epsilon), -math.pi / 2, math.pi / 2)
    false_positive = 0
    false_negative = 0
    for _ in range(repetitions):
        j = rng.choice(series.frequencies, size=n_samples, p=probabilities)
        samples = AcdfSampleSet(
            j=j,
            z_re=np.ones(n_samples),
            z_im=rng.choice([-1.0, 1.0], size=n_samples),
            rotation_counts=np.ones(n_samples, dtype=int),
            a_value=a_value,
            seed=0,
        )
        false_positive += estimate_at(samples, low).value >= eta / 2
        false_negative += estimate_at(samples, high).value < eta / 2
    assert false_positive / repetitions <= nu
    assert false_negative / repetitions <= nu


@pytest.mark.slow
def test_sampled_frequencies_follow_the_mixture_weights():
    h, _, state, series, rv, cfg = small_problem()
    n_samples = 100_000
    samples = collect_samples(h, state, series, rv, cfg, n_samples=n_samples, seed=5)
    weights = mixture_weights(series, rv)
    probabilities = weights / weights.sum()
    observed = np.array([np.count_nonzero(samples.j == k) for k in rv.frequencies])
    expected = probabilities * n_samples

    sigma = np.sqrt(n_samples * probabilities * (1.0 - probabilities))
    assert np.all(np.abs(observed - expected) <= 4 * sigma + 1.0)

    # the high-frequency tail is pooled into the last bin with enough expected counts
    sparse = expected < 20
    pooled_observed = observed[~sparse].astype(float)
    pooled_expected = expected[~sparse].copy()
    pooled_observed[-1] += observed[sparse].sum()
    pooled_expected[-1] += expected[sparse].sum()
    _, p_value = chisquare(pooled_observed, pooled_expected)
    assert p_value > 1e-3
