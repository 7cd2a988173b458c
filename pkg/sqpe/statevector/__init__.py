"""Dense statevector emulation and exact spectral references."""

from .emulator import (
    StateVector,
    apply_pauli,
    apply_pauli_rotation,
    apply_unitary,
    batch_expectations,
    expectation,
)
from .spectrum import (
    MAX_DENSE_QUBITS,
    SpectralReference,
    Spectrum,
    dense_matrix,
    diagonalize,
    exact_cdf,
    make_trial_state,
    pauli_matrix,
)

__all__ = [
    "StateVector",
    "apply_pauli",
    "apply_pauli_rotation",
    "apply_unitary",
    "batch_expectations",
    "expectation",
    "MAX_DENSE_QUBITS",
    "SpectralReference",
    "Spectrum",
    "dense_matrix",
    "diagonalize",
    "exact_cdf",
    "make_trial_state",
    "pauli_matrix",
]
