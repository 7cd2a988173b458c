"""
Random compilation of e^{i t H/lambda} into Pauli and Pauli-rotation factors.

Each of the ``r`` segments draws an even order ``n`` from ``qn_distribution``,
then ``n + 1`` term indices from |alpha_l| / lambda. The first ``n`` indices
become plain Pauli factors and the last one a rotation whose angle carries the
sign of its coefficient. The accumulated phase makes ``C**r * phase * U`` an
unbiased sample of the time evolution, with ``C`` from ``normalization_sum``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from sqpe.pauli import ONE, PauliString, PauliSum, Phase, probability_weights

logger = logging.getLogger(__name__)

DEFAULT_EPSILON_Q = 1e-12
DEFAULT_EPSILON_C = 1e-14
_MAX_ORDER = 10_000


@dataclass(frozen=True)
class CompilationConfig:
    t: float
    r: int
    hamiltonian: PauliSum
    epsilon_q: float = DEFAULT_EPSILON_Q

    def __post_init__(self) -> None:
        if not math.isfinite(self.t):
            raise ValueError(f"t must be finite, got {self.t}")
        if self.r < 1:
            raise ValueError(f"r must be a positive integer, got {self.r}")
        if not 0.0 < self.epsilon_q < 1.0:
            raise ValueError(f"epsilon_q must lie in (0, 1), got {self.epsilon_q}")


@dataclass(frozen=True)
class PauliFactor:
    string: PauliString

    def describe(self) -> str:
        return f"P {self.string.label}"


@dataclass(frozen=True)
class RotationFactor:
    """exp(i theta P)."""

    string: PauliString
    theta: float

    def describe(self) -> str:
        return f"R {self.string.label} {self.theta:.6g}"


Factor = Union[PauliFactor, RotationFactor]


@dataclass(frozen=True)
class SampledUnitary:
    """Factors in application order plus the accumulated phase s."""

    n_qubits: int
    factors: Tuple[Factor, ...]
    phase: Phase = ONE

    @property
    def rotation_count(self) -> int:
        return sum(1 for factor in self.factors if isinstance(factor, RotationFactor))

    def describe(self) -> str:
        lines = [f"phase {self.phase}"]
        lines.extend(factor.describe() for factor in self.factors)
        return "\n".join(lines)


@dataclass(frozen=True)
class NormalizationSum:
    value: float
    truncation_terms: int


@dataclass(frozen=True)
class QnDistribution:
    """Truncated, renormalized law of the even order n; ``tail`` is the mass cut off."""

    support: np.ndarray
    probabilities: np.ndarray
    tail: float

    @property
    def mean(self) -> float:
        return float(np.dot(self.support, self.probabilities))


def theta_of(n: int, t: float, r: int) -> float:
    if n < 0 or n % 2:
        raise ValueError(f"n must be an even non-negative integer, got {n}")
    if r < 1:
        raise ValueError(f"r must be a positive integer, got {r}")
    ratio = (t / r) / (n + 1)
    return float(np.sign(t)) * math.acos(1.0 / math.sqrt(1.0 + ratio * ratio))


def _log_weight(order: int, log_x: float, x: float) -> float:
    """log of |x|^order / order! * sqrt(1 + (x / (order + 1))^2)."""
    ratio = x / (order + 1)
    return order * log_x - math.lgamma(order + 1) + 0.5 * math.log1p(ratio * ratio)


def _even_weights(x: float, cutoff: float) -> np.ndarray:
    """Weights of orders 0, 2, 4, ... until a term drops below ``cutoff`` times the running sum past the peak."""
    if x == 0.0:
        return np.ones(1)
    log_x = math.log(abs(x))
    peak = _log_weight(0, log_x, x)
    logs = [peak]
    order = 2
    while order < _MAX_ORDER:
        value = _log_weight(order, log_x, x)
        peak = max(peak, value)
        logs.append(value)
        if order > abs(x) and value - peak < math.log(cutoff) - 5.0:
            break
        order += 2
    else:
        logger.warning("Order series for x=%.3g hit the cap of %d terms.", x, _MAX_ORDER)
    logs_array = np.asarray(logs)
    return np.exp(logs_array - logs_array.max())


@lru_cache(maxsize=1024)
def qn_distribution(t: float, r: int, epsilon_q: float = DEFAULT_EPSILON_Q) -> QnDistribution:
    if not 0.0 < epsilon_q < 1.0:
        raise ValueError(f"epsilon_q must lie in (0, 1), got {epsilon_q}")
    if r < 1:
        raise ValueError(f"r must be a positive integer, got {r}")
    weights = _even_weights(t / r, epsilon_q)
    total = weights.sum()
    # tails[k] = mass of orders strictly above 2k
    tails = (total - np.cumsum(weights)) / total
    keep = int(np.argmax(tails < epsilon_q)) + 1
    kept = weights[:keep]
    probabilities = kept / kept.sum()
    support = np.arange(0, 2 * keep, 2)
    support.setflags(write=False)
    probabilities.setflags(write=False)
    return QnDistribution(support=support, probabilities=probabilities, tail=float(max(tails[keep - 1], 0.0)))


@lru_cache(maxsize=4096)
def normalization_sum(t: float, r: int, epsilon_c: float = DEFAULT_EPSILON_C) -> NormalizationSum:
    """C = sum over even n of |x|^n / n! * sqrt(1 + (x/(n+1))^2) with x = t/r, stopped once the next term is below epsilon_c."""
    if not epsilon_c > 0:
        raise ValueError(f"epsilon_c must be positive, got {epsilon_c}")
    if r < 1:
        raise ValueError(f"r must be a positive integer, got {r}")
    x = t / r
    if x == 0.0:
        return NormalizationSum(value=1.0, truncation_terms=1)

    log_x = math.log(abs(x))
    terms = [math.exp(_log_weight(0, log_x, x))]
    order = 2
    while order < _MAX_ORDER:
        term = math.exp(_log_weight(order, log_x, x))
        if term < epsilon_c and order > abs(x):
            break
        terms.append(term)
        order += 2
    return NormalizationSum(value=math.fsum(terms), truncation_terms=len(terms))


@lru_cache(maxsize=64)
def term_tables(h: PauliSum) -> Tuple[np.ndarray, Tuple[int, ...]]:
    weights = probability_weights(h)
    probabilities = np.array([p for p, _ in weights])
    probabilities /= probabilities.sum()
    probabilities.setflags(write=False)
    return probabilities, tuple(sign for _, sign in weights)


@dataclass(frozen=True)
class SegmentDraw:
    """Raw draws behind one sampled unitary: the order of every segment and the term indices in factor order."""

    orders: np.ndarray
    indices: np.ndarray


def draw_segments(config: CompilationConfig, rng: np.random.Generator) -> SegmentDraw:
    distribution = qn_distribution(config.t, config.r, config.epsilon_q)
    probabilities, _ = term_tables(config.hamiltonian)
    orders = rng.choice(distribution.support, size=config.r, p=distribution.probabilities)
    indices = rng.choice(len(probabilities), size=int(orders.sum()) + config.r, p=probabilities)
    return SegmentDraw(orders=orders, indices=indices)


def sample_unitary(config: CompilationConfig, rng: np.random.Generator) -> SampledUnitary:
    return assemble_unitary(config, draw_segments(config, rng))


def assemble_unitary(config: CompilationConfig, draw: SegmentDraw) -> SampledUnitary:
    h = config.hamiltonian
    _, signs = term_tables(h)
    strings = h.strings
    orders, indices = draw.orders, draw.indices

    time_sign = 1 if config.t >= 0 else -1
    factors: List[Factor] = []
    power = 0
    cursor = 0
    for order in orders:
        order = int(order)
        segment = indices[cursor : cursor + order + 1]
        cursor += order + 1
        for index in segment[:order]:
            factors.append(PauliFactor(strings[index]))
            if signs[index] < 0:
                power += 2
        last = segment[order]
        factors.append(RotationFactor(strings[last], signs[last] * theta_of(order, config.t, config.r)))
        # (i sgn t)^n
        power += order if time_sign > 0 else 3 * order
    return SampledUnitary(n_qubits=h.n_qubits, factors=tuple(factors), phase=Phase(power))


def write_unitary_dump(u: SampledUnitary, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(u.describe() + "\n")
