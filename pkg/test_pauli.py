"""Pauli-string algebra and Hamiltonian normalization."""

import itertools
import math
import sys
from pathlib import Path

import numpy as np
import pytest

PROJECT_ROOT = Path(__file__).resolve().parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from sqpe.pauli import (  # noqa: E402
    MINUS_I,
    MINUS_ONE,
    ONE,
    PLUS_I,
    PauliString,
    PauliTerm,
    Phase,
    multiply,
    normalize_hamiltonian,
    probability_weights,
)
from sqpe.statevector import pauli_matrix  # noqa: E402

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
SINGLE = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_label(label: str) -> np.ndarray:
    matrix = np.ones((1, 1), dtype=complex)
    for letter in label:
        matrix = np.kron(matrix, SINGLE[letter])
    return matrix


def test_phase_group():
    assert PLUS_I * PLUS_I == MINUS_ONE
    assert MINUS_I * PLUS_I == ONE
    assert Phase(7) == MINUS_I
    assert str(MINUS_I) == "-i"
    assert Phase.from_sign(-1) == MINUS_ONE
    assert Phase.from_sign(1).value == 1


def test_label_bitmasks_put_qubit_zero_in_the_top_bit():
    p = PauliString.from_label("ZIX")
    assert p.n_qubits == 3
    assert p.x_mask == 0b001
    assert p.z_mask == 0b100
    assert p.label == "ZIX"
    assert PauliString.from_label("yxz").label == "YXZ"
    assert PauliString.from_label("YIY").y_count == 2
    assert PauliString.identity(4).is_identity


@pytest.mark.parametrize("label", ["", "ZQX"])
def test_bad_labels_are_rejected(label):
    with pytest.raises(ValueError):
        PauliString.from_label(label)


def test_masks_must_fit_the_qubit_count():
    with pytest.raises(ValueError):
        PauliString(2, x_mask=0b100)
    with pytest.raises(ValueError):
        PauliString(0)


@pytest.mark.parametrize("label", ["X", "Y", "Z", "ZIX", "YXZ", "IYYI"])
def test_dense_matrix_matches_kronecker_product(label):
    np.testing.assert_allclose(pauli_matrix(PauliString.from_label(label)), kron_label(label), atol=1e-15)


def test_single_qubit_multiplication_table():
    for a, b in itertools.product("IXYZ", repeat=2):
        phase, product = multiply(PauliString.from_label(a), PauliString.from_label(b))
        np.testing.assert_allclose(phase.value * SINGLE[product.label], SINGLE[a] @ SINGLE[b], atol=1e-15)
    phase, product = multiply(PauliString.from_label("X"), PauliString.from_label("Y"))
    assert (phase, product.label) == (PLUS_I, "Z")


@pytest.mark.parametrize("a, b", [("ZIX", "XYZ"), ("YYZ", "ZXY"), ("XXXX", "ZZZZ"), ("IYIY", "YIYI")])
def test_multi_qubit_products_match_dense_matrices(a, b):
    phase, product = multiply(PauliString.from_label(a), PauliString.from_label(b))
    np.testing.assert_allclose(phase.value * kron_label(product.label), kron_label(a) @ kron_label(b), atol=1e-14)


def test_multiply_rejects_mismatched_sizes():
    with pytest.raises(ValueError):
        multiply(PauliString.from_label("XX"), PauliString.from_label("X"))


def test_normalization_of_the_toy_hamiltonian():
    terms = [
        PauliTerm.from_label(0.2, "IIZ"),
        PauliTerm.from_label(-0.1, "ZIX"),
        PauliTerm.from_label(0.15, "IZI"),
        PauliTerm.from_label(0.25, "IZZ"),
    ]
    h = normalize_hamiltonian(terms, delta_precision=0.05)
    assert h.lam == pytest.approx(0.7)
    assert h.tau == pytest.approx(math.pi / 1.45)
    assert h.tau_lambda < math.pi / 2
    assert h.n_qubits == 3
    assert len(h) == 4
    weights = probability_weights(h)
    assert [sign for _, sign in weights] == [1, -1, 1, 1]
    assert sum(p for p, _ in weights) == pytest.approx(1.0)
    assert weights[3][0] == pytest.approx(0.25 / 0.7)


def test_normalization_rejects_bad_input():
    with pytest.raises(ValueError):
        normalize_hamiltonian([], delta_precision=0.1)
    with pytest.raises(ValueError):
        normalize_hamiltonian([PauliTerm.from_label(1.0, "X")], delta_precision=0.0)
    with pytest.raises(ValueError):
        normalize_hamiltonian([PauliTerm.from_label(1.0, "X"), PauliTerm.from_label(1.0, "XZ")], delta_precision=0.1)
    with pytest.raises(ValueError):
        normalize_hamiltonian([PauliTerm.from_label(1.0, "X"), PauliTerm.from_label(0.0, "Z")], delta_precision=0.1)
    with pytest.raises(ValueError):
        PauliTerm.from_label(float("inf"), "X")
