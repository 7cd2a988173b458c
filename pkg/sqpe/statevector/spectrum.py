from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from sqpe.pauli import PauliString, PauliSum

from .emulator import StateVector, _pauli_action

logger = logging.getLogger(__name__)

MAX_DENSE_QUBITS = 12
DEGENERACY_GAP = 1e-9


@dataclass(frozen=True)
class SpectralReference:
    """Eigenvalues beta_k (ascending) and overlaps p_k = |<psi_k|phi>|^2."""

    eigenvalues: np.ndarray
    overlaps: np.ndarray

    @property
    def project_dim(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def ground_overlap(self) -> float:
        """p_0 summed over every eigenvalue within DEGENERACY_GAP of the ground energy."""
        ground = self.eigenvalues - self.eigenvalues[0] < DEGENERACY_GAP
        return float(self.overlaps[ground].sum())


@dataclass(frozen=True)
class Spectrum:
    """Full eigendecomposition of a dense Hamiltonian; columns of ``eigenvectors`` are |psi_k>."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n_qubits(self) -> int:
        return int(round(math.log2(self.eigenvalues.size)))

    @property
    def ground_state(self) -> StateVector:
        return StateVector.from_amplitudes(self.eigenvectors[:, 0])

    @property
    def ground_space(self) -> np.ndarray:
        """Orthonormal columns spanning the ground eigenspace."""
        return self.eigenvectors[:, self.eigenvalues - self.eigenvalues[0] < DEGENERACY_GAP]

    @property
    def ground_gap(self) -> float:
        if self.eigenvalues.size < 2:
            return math.inf
        return float(self.eigenvalues[1] - self.eigenvalues[0])

    def reference(self, state: StateVector) -> SpectralReference:
        if state.dimension != self.eigenvalues.size:
            raise ValueError("State dimension does not match the Hamiltonian.")
        overlaps = np.abs(self.eigenvectors.conj().T @ state.amplitudes) ** 2
        total = overlaps.sum()
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"Overlaps sum to {total}, expected 1.")
        return SpectralReference(eigenvalues=self.eigenvalues, overlaps=overlaps)


def pauli_matrix(p: PauliString) -> np.ndarray:
    dim = 1 << p.n_qubits
    perm, factor = _pauli_action(p.n_qubits, p.x_mask, p.z_mask)
    matrix = np.zeros((dim, dim), dtype=complex)
    matrix[np.arange(dim), perm] = factor
    return matrix


def dense_matrix(h: PauliSum) -> np.ndarray:
    if h.n_qubits > MAX_DENSE_QUBITS:
        raise ValueError(f"Dense emulation is capped at {MAX_DENSE_QUBITS} qubits, got {h.n_qubits}.")
    return sum(term.coefficient * pauli_matrix(term.string) for term in h.terms)


def diagonalize(h: PauliSum) -> Spectrum:
    matrix = dense_matrix(h)
    eigenvalues, eigenvectors = eigh(matrix)
    logger.debug("Diagonalized %d-qubit Hamiltonian, ground energy %.6f", h.n_qubits, eigenvalues[0])
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def make_trial_state(spectrum: Spectrum, eta: float, seed: int) -> StateVector:
    """
    |phi> = sqrt(eta)|psi_0> + sqrt(1 - eta)|psi_perp> with |psi_perp> a
    seeded random unit vector orthogonal to the whole ground eigenspace, so the
    overlap with that eigenspace is eta even when it is degenerate.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    if spectrum.ground_gap < DEGENERACY_GAP:
        logger.warning(
            "Ground state is degenerate (gap %.2e); using the first eigenvector of the sorted basis.",
            spectrum.ground_gap,
        )
    ground = spectrum.eigenvectors[:, 0]
    space = spectrum.ground_space
    dim = ground.size
    if eta == 1.0 or space.shape[1] == dim:
        return StateVector.from_amplitudes(ground)

    rng = np.random.default_rng(seed)
    perp = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    perp -= space @ (space.conj().T @ perp)
    perp /= np.linalg.norm(perp)
    amplitudes = math.sqrt(eta) * ground + math.sqrt(1.0 - eta) * perp
    return StateVector.from_amplitudes(amplitudes)


def exact_cdf(ref: SpectralReference, tau: float, x: float) -> float:
    """C(x) = sum of p_k over tau*beta_k <= x."""
    return float(min(1.0, ref.overlaps[tau * ref.eigenvalues <= x].sum()))
