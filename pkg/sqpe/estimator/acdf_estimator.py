"""
Monte-Carlo estimator of the approximate CDF.

Only positive frequencies are sampled: the negative ones are complex
conjugates of the positive ones, so one sample of frequency j carries both.
A sample draws j with probability |F_j| mu_j / A, compiles e^{i t_j H/lambda}
with ``r_j`` segments and records the Hadamard-test outcomes of
s <phi|U|phi>. The records do not depend on x and are reused for every query.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from schema import EstimatorConfig
from sqpe.compiler import DEFAULT_EPSILON_C, DEFAULT_EPSILON_Q, CompilationConfig, draw_segments, normalization_sum
from sqpe.fourier import FourierSeries, evaluate
from sqpe.pauli import PauliSum
from sqpe.statevector import SpectralReference, StateVector, batch_expectations

logger = logging.getLogger(__name__)

CHUNK_SAMPLES = 16_384


@dataclass(frozen=True)
class RuntimeVector:
    """Segment counts r_j and times t_j = -j tau lambda for every stored frequency j."""

    frequencies: np.ndarray
    r: np.ndarray
    t: np.ndarray

    def __post_init__(self) -> None:
        frequencies = np.asarray(self.frequencies, dtype=int)
        r = np.asarray(self.r, dtype=int)
        t = np.asarray(self.t, dtype=float)
        if not (frequencies.shape == r.shape == t.shape) or frequencies.ndim != 1:
            raise ValueError("RuntimeVector frequencies, r and t must be 1-d arrays of equal length.")
        if np.any(r < 1):
            raise ValueError("Every r_j must be a positive integer.")
        for name, array in (("frequencies", frequencies), ("r", r), ("t", t)):
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @classmethod
    def from_segments(cls, series: FourierSeries, tau_lambda: float, r: Sequence[int]) -> "RuntimeVector":
        frequencies = series.frequencies
        return cls(frequencies=frequencies, r=np.asarray(r, dtype=int), t=-frequencies * tau_lambda)

    def __len__(self) -> int:
        return int(self.r.size)


@dataclass(frozen=True)
class AcdfSampleSet:
    """Per-sample (j, z_re, z_im) plus rotation counts; ``z`` holds outcomes of s <phi|U|phi>."""

    j: np.ndarray
    z_re: np.ndarray
    z_im: np.ndarray
    rotation_counts: np.ndarray
    a_value: float
    seed: int
    shot_mode: str = "single_shot"

    def __post_init__(self) -> None:
        for name in ("j", "z_re", "z_im", "rotation_counts"):
            array = np.array(getattr(self, name))
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @property
    def count(self) -> int:
        return int(self.j.size)

    @property
    def records(self) -> List[Tuple[int, float, float]]:
        return list(zip(self.j.tolist(), self.z_re.tolist(), self.z_im.tolist()))


@dataclass(frozen=True)
class AcdfEstimate:
    x: float
    value: float
    std_error: float


def _check_alignment(series: FourierSeries, rv: RuntimeVector) -> None:
    if rv.frequencies.shape != series.frequencies.shape or np.any(rv.frequencies != series.frequencies):
        raise ValueError("Runtime vector frequencies do not match the Fourier series.")


def segment_normalizations(rv: RuntimeVector, epsilon_c: float = DEFAULT_EPSILON_C) -> np.ndarray:
    """C_j for every frequency."""
    return np.array([normalization_sum(float(t), int(r), epsilon_c).value for t, r in zip(rv.t, rv.r)])


def mixture_weights(series: FourierSeries, rv: RuntimeVector, epsilon_c: float = DEFAULT_EPSILON_C) -> np.ndarray:
    """|F_j| mu_j with mu_j = C_j ** r_j."""
    _check_alignment(series, rv)
    mu = np.exp(rv.r * np.log(segment_normalizations(rv, epsilon_c)))
    return series.magnitudes * mu


def compute_a(series: FourierSeries, rv: RuntimeVector, epsilon_c: float = DEFAULT_EPSILON_C) -> float:
    return float(mixture_weights(series, rv, epsilon_c).sum())


def legacy_a(series: FourierSeries, rv: RuntimeVector, epsilon_c: float = DEFAULT_EPSILON_C) -> float:
    """Same sum over all of S1: the k = 0 term plus the mirrored negative frequencies with r_{-j} = r_j."""
    positive = mixture_weights(series, rv, epsilon_c)
    mirrored = RuntimeVector(frequencies=-rv.frequencies, r=rv.r, t=-rv.t)
    negative = series.magnitudes * np.exp(mirrored.r * np.log(segment_normalizations(mirrored, epsilon_c)))
    return float(abs(series.coefficient(0)) + positive.sum() + negative.sum())


def sample_count_scaled(a_value: float, cfg: EstimatorConfig) -> float:
    """N_s / ln(1/nu) before rounding."""
    return 8.0 * (a_value / cfg.margin) ** 2


def sample_count(a_value: float, cfg: EstimatorConfig) -> int:
    n_s = math.ceil(sample_count_scaled(a_value, cfg) * math.log(1.0 / cfg.nu))
    if n_s < 1:
        logger.warning("Sample count formula gave %d for nu=%g; using 1 sample.", n_s, cfg.nu)
        return 1
    return n_s


def legacy_sample_count(a_legacy: float, cfg: EstimatorConfig) -> int:
    return max(1, math.ceil((2.0 * a_legacy / cfg.margin) ** 2 * math.log(1.0 / cfg.nu)))


def check_halving(n_s: int, n_s_legacy: int) -> bool:
    holds = n_s < n_s_legacy / 2
    if not holds:
        logger.warning("Sample count %d is not below half of the full-spectrum count %d.", n_s, n_s_legacy)
    return holds


def sample_stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for sample ``index`` under master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _hadamard_shots(values: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """+1 with probability (1 + value) / 2, decided by one uniform draw per shot."""
    probability = np.clip(0.5 * (1.0 + values), 0.0, 1.0)
    return np.where(uniforms < probability, 1.0, -1.0)


def collect_samples(
    h: PauliSum,
    state: StateVector,
    series: FourierSeries,
    rv: RuntimeVector,
    cfg: EstimatorConfig,
    n_samples: int,
    seed: int,
    threads: int = 1,
    epsilon_q: float = DEFAULT_EPSILON_Q,
    epsilon_c: float = DEFAULT_EPSILON_C,
) -> AcdfSampleSet:
    if n_samples < 1:
        raise ValueError(f"n_samples must be at least 1, got {n_samples}")
    if threads < 1:
        raise ValueError(f"threads must be at least 1, got {threads}")
    if state.n_qubits != h.n_qubits:
        raise ValueError(f"State has {state.n_qubits} qubits, Hamiltonian has {h.n_qubits}.")

    weights = mixture_weights(series, rv, epsilon_c)
    a_value = float(weights.sum())
    probabilities = weights / a_value
    configs = [
        CompilationConfig(t=float(t), r=int(r), hamiltonian=h, epsilon_q=epsilon_q) for t, r in zip(rv.t, rv.r)
    ]
    exact = cfg.shot_mode == "exact"

    j = np.empty(n_samples, dtype=int)
    z_re = np.empty(n_samples)
    z_im = np.empty(n_samples)
    rotations = np.empty(n_samples, dtype=int)

    def run(indices: np.ndarray) -> None:
        # every sample reads its own stream in a fixed order: frequency, compilation, two shot uniforms
        choices = np.empty(indices.size, dtype=int)
        uniforms = np.empty((indices.size, 2))
        draws = []
        for position, index in enumerate(indices):
            rng = sample_stream(seed, int(index))
            choices[position] = rng.choice(len(configs), p=probabilities)
            draws.append(draw_segments(configs[choices[position]], rng))
            uniforms[position] = rng.random(), rng.random()

        # samples sharing a frequency are evaluated together
        for choice in np.unique(choices):
            positions = np.flatnonzero(choices == choice)
            values = batch_expectations(state, configs[choice], [draws[p] for p in positions])
            targets = indices[positions]
            j[targets] = rv.frequencies[choice]
            rotations[targets] = configs[choice].r
            if exact:
                z_re[targets], z_im[targets] = values.real, values.imag
            else:
                z_re[targets] = _hadamard_shots(values.real, uniforms[positions, 0])
                z_im[targets] = _hadamard_shots(values.imag, uniforms[positions, 1])

    pieces = max(math.ceil(n_samples / CHUNK_SAMPLES), 1 if threads == 1 else min(n_samples, threads * 4))
    chunks = np.array_split(np.arange(n_samples), pieces)
    if threads == 1:
        for chunk in chunks:
            run(chunk)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, chunks))

    logger.info(
        "Collected %d samples (A=%.6f, mean rotations %.1f, mode %s)",
        n_samples,
        a_value,
        rotations.mean(),
        cfg.shot_mode,
    )
    return AcdfSampleSet(
        j=j,
        z_re=z_re,
        z_im=z_im,
        rotation_counts=rotations,
        a_value=a_value,
        seed=seed,
        shot_mode=cfg.shot_mode,
    )


def estimate_at(samples: AcdfSampleSet, x: float) -> AcdfEstimate:
    if samples.count == 0:
        raise ValueError("Cannot estimate from an empty sample set.")
    gamma = np.sin(samples.j * x) * samples.z_re + np.cos(samples.j * x) * samples.z_im
    value = 0.5 + 2.0 * samples.a_value * float(gamma.mean())
    std_error = 0.0
    if samples.count > 1:
        std_error = 2.0 * samples.a_value * float(gamma.std(ddof=1)) / math.sqrt(samples.count)
    return AcdfEstimate(x=float(x), value=value, std_error=std_error)


def acdf_closed_form(
    ref: SpectralReference, series: FourierSeries, tau: float, x: Union[float, np.ndarray]
) -> Union[float, np.ndarray]:
    """Sum over eigenvalues of p_k F(x - tau beta_k)."""
    points = np.asarray(x, dtype=float)
    shifted = np.subtract.outer(points, tau * ref.eigenvalues)
    values = evaluate(series, shifted.ravel()).reshape(shifted.shape) @ ref.overlaps
    if points.ndim == 0:
        return float(values)
    return values
