from __future__ import annotations

import math
from pathlib import Path
from typing import List

from sqpe.pauli import PauliString, PauliSum, PauliTerm, normalize_hamiltonian


class HamiltonianParseError(ValueError):
    """A Hamiltonian file line that cannot be read as ``<coefficient> <pauli-letters>``."""

    def __init__(self, path: Path, line_number: int, message: str) -> None:
        super().__init__(f"{path}:{line_number}: {message}")
        self.path = path
        self.line_number = line_number


def load_terms_from_file(file_path: Path) -> List[PauliTerm]:
    """Read one ``<coefficient> <pauli-letters>`` term per line; ``#`` starts a comment."""
    if not file_path.exists():
        raise FileNotFoundError(f"Hamiltonian file not found: {file_path}")

    terms: List[PauliTerm] = []
    with open(file_path, "r", encoding="utf-8") as f:
        for line_num, line in enumerate(f, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            tokens = text.split()
            if len(tokens) != 2:
                raise HamiltonianParseError(file_path, line_num, f"expected '<coefficient> <pauli-letters>', got {text!r}")
            raw_coefficient, label = tokens
            try:
                coefficient = float(raw_coefficient)
            except ValueError:
                raise HamiltonianParseError(file_path, line_num, f"bad coefficient {raw_coefficient!r}") from None
            if not math.isfinite(coefficient):
                raise HamiltonianParseError(file_path, line_num, f"coefficient {raw_coefficient!r} is not finite")
            if coefficient == 0.0:
                raise HamiltonianParseError(file_path, line_num, f"zero coefficient for {label}")
            try:
                string = PauliString.from_label(label)
            except ValueError as exc:
                raise HamiltonianParseError(file_path, line_num, str(exc)) from None
            if terms and string.n_qubits != terms[0].string.n_qubits:
                raise HamiltonianParseError(
                    file_path,
                    line_num,
                    f"{label} has {string.n_qubits} qubits, earlier terms have {terms[0].string.n_qubits}",
                )
            terms.append(PauliTerm(coefficient, string))

    if not terms:
        raise HamiltonianParseError(file_path, 0, "no Pauli terms found")
    return terms


def parse_hamiltonian(file_path: Path, delta_precision: float) -> PauliSum:
    return normalize_hamiltonian(load_terms_from_file(Path(file_path)), delta_precision)
