"""Pauli-string algebra and LCU Hamiltonians."""

from .hamiltonian import PauliSum, PauliTerm, normalize_hamiltonian, probability_weights
from .pauli_string import MINUS_I, MINUS_ONE, ONE, PLUS_I, PauliString, Phase, multiply

__all__ = [
    "PauliString",
    "Phase",
    "ONE",
    "PLUS_I",
    "MINUS_ONE",
    "MINUS_I",
    "multiply",
    "PauliTerm",
    "PauliSum",
    "normalize_hamiltonian",
    "probability_weights",
]
