from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Tuple

from .pauli_string import PauliString


@dataclass(frozen=True)
class PauliTerm:
    """One weighted Pauli string alpha_j * P_j of an LCU Hamiltonian."""

    coefficient: float
    string: PauliString

    def __post_init__(self) -> None:
        if not math.isfinite(self.coefficient):
            raise ValueError(f"Pauli coefficient must be finite, got {self.coefficient}")

    @classmethod
    def from_label(cls, coefficient: float, label: str) -> "PauliTerm":
        return cls(float(coefficient), PauliString.from_label(label))

    @property
    def sign(self) -> int:
        return 1 if self.coefficient >= 0 else -1


@dataclass(frozen=True)
class PauliSum:
    """
    LCU Hamiltonian H = sum_j alpha_j P_j with lambda = sum_j |alpha_j| and the
    normalisation tau = pi / (2 lambda + delta_precision). Term order is kept
    from the input so sampled indices refer to it.
    """

    terms: Tuple[PauliTerm, ...]
    lam: float
    tau: float
    delta_precision: float

    @property
    def n_qubits(self) -> int:
        return self.terms[0].string.n_qubits

    @property
    def tau_lambda(self) -> float:
        return self.tau * self.lam

    @property
    def coefficients(self) -> List[float]:
        return [term.coefficient for term in self.terms]

    @property
    def strings(self) -> List[PauliString]:
        return [term.string for term in self.terms]

    def __len__(self) -> int:
        return len(self.terms)


def normalize_hamiltonian(terms: Iterable[PauliTerm], delta_precision: float) -> PauliSum:
    terms = tuple(terms)
    if not terms:
        raise ValueError("Hamiltonian must contain at least one Pauli term.")
    if not delta_precision > 0:
        raise ValueError(f"delta_precision must be positive, got {delta_precision}")

    n_qubits = terms[0].string.n_qubits
    for index, term in enumerate(terms):
        if term.string.n_qubits != n_qubits:
            raise ValueError(
                f"Term {index} acts on {term.string.n_qubits} qubits, expected {n_qubits}."
            )

    lam = math.fsum(abs(term.coefficient) for term in terms)
    if lam == 0.0:
        raise ValueError("Hamiltonian has zero total Pauli weight.")
    for index, term in enumerate(terms):
        if term.coefficient == 0.0:
            raise ValueError(f"Term {index} ({term.string.label}) has a zero coefficient.")

    tau = math.pi / (2.0 * lam + delta_precision)
    assert tau * lam < math.pi / 2
    return PauliSum(terms=terms, lam=lam, tau=tau, delta_precision=delta_precision)


def probability_weights(h: PauliSum) -> List[Tuple[float, int]]:
    """Return (p_i, sign_i) with p_i = |alpha_i| / lambda, in term order."""
    return [(abs(term.coefficient) / h.lam, term.sign) for term in h.terms]

