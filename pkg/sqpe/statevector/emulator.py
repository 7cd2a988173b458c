"""
Dense statevector emulator.

Basis index b stores qubit 0 in its most significant bit, matching the label
convention of :mod:`sqpe.pauli.pauli_string`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from sqpe.compiler.random_compiler import (
    CompilationConfig,
    PauliFactor,
    RotationFactor,
    SampledUnitary,
    SegmentDraw,
    term_tables,
    theta_of,
)
from sqpe.pauli import ONE, PauliString, Phase, multiply

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-10
# rows times (dimension + segments) per batch in batch_expectations
BATCH_ELEMENTS = 1 << 21
_I_POWERS = np.array([1, 1j, -1, -1j])


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"Expected {1 << self.n_qubits} amplitudes for {self.n_qubits} qubits, got {amplitudes.shape}."
            )
        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"State is not normalized (squared norm {norm}).")
        amplitudes = amplitudes.copy()
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def basis(cls, n_qubits: int, index: int = 0) -> "StateVector":
        amplitudes = np.zeros(1 << n_qubits, dtype=complex)
        amplitudes[index] = 1.0
        return cls(n_qubits, amplitudes)

    @classmethod
    def from_amplitudes(cls, amplitudes: np.ndarray) -> "StateVector":
        """Normalize an arbitrary nonzero vector into a state."""
        amplitudes = np.asarray(amplitudes, dtype=complex)
        n_qubits = int(round(np.log2(amplitudes.size)))
        return cls(n_qubits, amplitudes / np.linalg.norm(amplitudes))

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def overlap(self, other: "StateVector") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@lru_cache(maxsize=4096)
def _pauli_action(n_qubits: int, x_mask: int, z_mask: int) -> Tuple[np.ndarray, np.ndarray]:
    """(perm, factor) such that (P psi)[c] = factor[c] * psi[perm[c]]."""
    index = np.arange(1 << n_qubits)
    parity = np.zeros_like(index)
    for bit in range(n_qubits):
        parity ^= (index >> bit) & (z_mask >> bit) & 1
    perm = index ^ x_mask
    y_phase = (1, 1j, -1, -1j)[bin(x_mask & z_mask).count("1") % 4]
    factor = y_phase * (1 - 2 * parity[perm]).astype(complex)
    perm.setflags(write=False)
    factor.setflags(write=False)
    return perm, factor


def _check_dimensions(state: StateVector, p: PauliString) -> None:
    if state.n_qubits != p.n_qubits:
        raise ValueError(f"Pauli string acts on {p.n_qubits} qubits, state has {state.n_qubits}.")


def _pauli_apply_raw(amplitudes: np.ndarray, p: PauliString) -> np.ndarray:
    perm, factor = _pauli_action(p.n_qubits, p.x_mask, p.z_mask)
    return factor * amplitudes[perm]


def _rotation_apply_raw(amplitudes: np.ndarray, p: PauliString, theta: float) -> np.ndarray:
    return np.cos(theta) * amplitudes + 1j * np.sin(theta) * _pauli_apply_raw(amplitudes, p)


def apply_pauli(state: StateVector, p: PauliString, phase: Phase = ONE) -> StateVector:
    _check_dimensions(state, p)
    return StateVector(state.n_qubits, phase.value * _pauli_apply_raw(state.amplitudes, p))


def apply_pauli_rotation(state: StateVector, p: PauliString, theta: float) -> StateVector:
    """Apply exp(i theta P) = cos(theta) I + i sin(theta) P."""
    _check_dimensions(state, p)
    if not np.isfinite(theta):
        raise ValueError(f"Rotation angle must be finite, got {theta}")
    return StateVector(state.n_qubits, _rotation_apply_raw(state.amplitudes, p, theta))


def apply_unitary(state: StateVector, u: SampledUnitary) -> np.ndarray:
    """
    Apply the factors of ``u`` in order and return the raw amplitudes. Runs of
    consecutive Pauli factors are merged with :func:`multiply` before they touch
    the vector. The sampled phase ``u.phase`` is not applied.
    """
    if u.n_qubits != state.n_qubits:
        raise ValueError(f"Unitary acts on {u.n_qubits} qubits, state has {state.n_qubits}.")
    amplitudes = np.array(state.amplitudes)
    pending_phase = ONE
    pending = PauliString.identity(state.n_qubits)
    for factor in u.factors:
        if isinstance(factor, PauliFactor):
            # later factors act from the left
            phase, pending = multiply(factor.string, pending)
            pending_phase = pending_phase * phase
            continue
        if isinstance(factor, RotationFactor):
            if not pending.is_identity or pending_phase != ONE:
                amplitudes = pending_phase.value * _pauli_apply_raw(amplitudes, pending)
                pending_phase, pending = ONE, PauliString.identity(state.n_qubits)
            amplitudes = _rotation_apply_raw(amplitudes, factor.string, factor.theta)
            continue
        raise TypeError(f"Unknown factor type {type(factor).__name__}")
    if not pending.is_identity or pending_phase != ONE:
        amplitudes = pending_phase.value * _pauli_apply_raw(amplitudes, pending)
    return amplitudes


def expectation(state: StateVector, u: SampledUnitary) -> complex:
    """Exact <phi|U|phi> for the factor product of ``u`` (phase not included)."""
    value = complex(np.vdot(state.amplitudes, apply_unitary(state, u)))
    if abs(value) > 1.0 + NORM_TOLERANCE:
        logger.warning("Expectation magnitude %.3e exceeds one; check unitary factors.", abs(value))
    return value


@lru_cache(maxsize=16)
def _popcounts(n_qubits: int) -> np.ndarray:
    table = np.array([bin(value).count("1") for value in range(1 << n_qubits)])
    table.setflags(write=False)
    return table


def _pauli_apply_rows(amplitudes: np.ndarray, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Row b of the result is P_b applied to row b, with P_b given by masks x[b], z[b]."""
    popcount = _popcounts(int(amplitudes.shape[1]).bit_length() - 1)
    perm = np.arange(amplitudes.shape[1])[None, :] ^ x[:, None]
    sign = 1 - 2 * (popcount[perm & z[:, None]] & 1)
    y_phase = _I_POWERS[popcount[x & z] % 4]
    return (y_phase[:, None] * sign) * np.take_along_axis(amplitudes, perm, axis=1)


def _layout(draw: SegmentDraw) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(segment, slot, term) of every plain Pauli factor plus the rotation term of every segment."""
    orders = np.asarray(draw.orders, dtype=int)
    indices = np.asarray(draw.indices, dtype=int)
    segment = np.repeat(np.arange(orders.size), orders + 1)
    starts = np.cumsum(orders + 1) - (orders + 1)
    slot = np.arange(indices.size) - starts[segment]
    plain = slot < orders[segment]
    return segment[plain], slot[plain], indices[plain], indices[~plain]


def _batch(state: StateVector, config: CompilationConfig, draws: Sequence[SegmentDraw]) -> np.ndarray:
    h = config.hamiltonian
    x_masks = np.array([p.x_mask for p in h.strings])
    z_masks = np.array([p.z_mask for p in h.strings])
    _, signs = term_tables(h)
    signs = np.asarray(signs)
    r = config.r
    rows = len(draws)

    orders = np.stack([np.asarray(draw.orders, dtype=int) for draw in draws])
    rotations = np.empty((rows, r), dtype=int)
    plain_rows, plain_segments, plain_slots, plain_terms = [], [], [], []
    for row, draw in enumerate(draws):
        segment, slot, terms, last = _layout(draw)
        rotations[row] = last
        plain_rows.append(np.full(terms.size, row))
        plain_segments.append(segment)
        plain_slots.append(slot)
        plain_terms.append(terms)
    plain_rows = np.concatenate(plain_rows)
    plain_segments = np.concatenate(plain_segments)
    plain_slots = np.concatenate(plain_slots)
    plain_terms = np.concatenate(plain_terms)
    sort = np.lexsort((plain_slots, plain_segments))
    plain_rows, plain_segments, plain_slots, plain_terms = (
        plain_rows[sort],
        plain_segments[sort],
        plain_slots[sort],
        plain_terms[sort],
    )
    bounds = np.searchsorted(plain_segments, np.arange(r + 1))

    # same phase bookkeeping as assemble_unitary
    negative = np.bincount(plain_rows[signs[plain_terms] < 0], minlength=rows)
    order_sum = orders.sum(axis=1)
    power = 2 * negative + (order_sum if config.t >= 0 else 3 * order_sum)

    distinct, inverse = np.unique(orders, return_inverse=True)
    by_order = np.array([theta_of(int(order), config.t, r) for order in distinct])
    thetas = signs[rotations] * by_order[inverse.reshape(orders.shape)]
    cos, sin = np.cos(thetas), np.sin(thetas)

    amplitudes = np.tile(state.amplitudes, (rows, 1))
    for k in range(r):
        lo, hi = bounds[k], bounds[k + 1]
        for slot in np.unique(plain_slots[lo:hi]) if hi > lo else ():
            pick = lo + np.flatnonzero(plain_slots[lo:hi] == slot)
            targets = plain_rows[pick]
            terms = plain_terms[pick]
            amplitudes[targets] = _pauli_apply_rows(amplitudes[targets], x_masks[terms], z_masks[terms])
        terms = rotations[:, k]
        flipped = _pauli_apply_rows(amplitudes, x_masks[terms], z_masks[terms])
        amplitudes = cos[:, k, None] * amplitudes + 1j * sin[:, k, None] * flipped
    return _I_POWERS[power % 4] * (amplitudes @ state.amplitudes.conj())


def batch_expectations(state: StateVector, config: CompilationConfig, draws: Sequence[SegmentDraw]) -> np.ndarray:
    """
    s <phi|U|phi> for every draw, phase included, evaluated row-wise on a
    matrix of state copies. Agrees with ``phase * expectation`` on the
    unitary that :func:`assemble_unitary` builds from the same draw.
    """
    if config.hamiltonian.n_qubits != state.n_qubits:
        raise ValueError(f"Unitary acts on {config.hamiltonian.n_qubits} qubits, state has {state.n_qubits}.")
    values = np.empty(len(draws), dtype=complex)
    step = max(1, BATCH_ELEMENTS // (state.dimension + config.r))
    for start in range(0, len(draws), step):
        values[start : start + step] = _batch(state, config, draws[start : start + step])
    return values
