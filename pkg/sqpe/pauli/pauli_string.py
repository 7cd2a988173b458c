"""
Pauli strings stored as an X bitmask and a Z bitmask.

Qubit ordering: the leftmost letter of a string such as ``"ZIX"`` is qubit 0
and maps to the most significant bit of a basis-state index, so the dense
matrix of ``"ZIX"`` is ``kron(Z, I, X)``.

A string with masks (x, z) denotes i^{|x & z|} X^x Z^z, which makes every
letter Hermitian (Y = iXZ) and leaves no residual phase on the string itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

_LETTERS = "IXYZ"
_LETTER_BY_BITS = {(False, False): "I", (True, False): "X", (True, True): "Y", (False, True): "Z"}


@dataclass(frozen=True)
class Phase:
    """Element i^power of the quarter-turn group {+1, +i, -1, -i}."""

    power: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "power", self.power % 4)

    @property
    def value(self) -> complex:
        return (1, 1j, -1, -1j)[self.power]

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.power + other.power)

    def __str__(self) -> str:
        return ("+1", "+i", "-1", "-i")[self.power]

    @classmethod
    def from_sign(cls, sign: int) -> "Phase":
        return cls(0 if sign > 0 else 2)


ONE = Phase(0)
PLUS_I = Phase(1)
MINUS_ONE = Phase(2)
MINUS_I = Phase(3)


def _popcount(value: int) -> int:
    return bin(value).count("1")


@dataclass(frozen=True)
class PauliString:
    n_qubits: int
    x_mask: int = 0
    z_mask: int = 0

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise ValueError("Pauli masks exceed the qubit count.")

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Build a string from letters, leftmost letter = qubit 0."""
        if not label:
            raise ValueError("Pauli label must not be empty.")
        n_qubits = len(label)
        x_mask = 0
        z_mask = 0
        for qubit, letter in enumerate(label.upper()):
            if letter not in _LETTERS:
                raise ValueError(f"Invalid Pauli letter {letter!r} in {label!r}")
            bit = 1 << (n_qubits - 1 - qubit)
            if letter in "XY":
                x_mask |= bit
            if letter in "ZY":
                z_mask |= bit
        return cls(n_qubits, x_mask, z_mask)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits)

    @property
    def label(self) -> str:
        letters = []
        for qubit in range(self.n_qubits):
            bit = 1 << (self.n_qubits - 1 - qubit)
            key = (bool(self.x_mask & bit), bool(self.z_mask & bit))
            letters.append(_LETTER_BY_BITS[key])
        return "".join(letters)

    @property
    def letters(self) -> Tuple[str, ...]:
        return tuple(self.label)

    @property
    def y_count(self) -> int:
        return _popcount(self.x_mask & self.z_mask)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def __str__(self) -> str:
        return self.label


def multiply(a: PauliString, b: PauliString) -> Tuple[Phase, PauliString]:
    """Return (phase, c) with a·b = phase·c as operators."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"Qubit count mismatch: {a.n_qubits} != {b.n_qubits}")
    product = PauliString(a.n_qubits, a.x_mask ^ b.x_mask, a.z_mask ^ b.z_mask)
    # Z^za X^xb = (-1)^{|za & xb|} X^xb Z^za
    power = a.y_count + b.y_count - product.y_count + 2 * _popcount(a.z_mask & b.x_mask)
    return Phase(power), product
