import numpy as np
import pytest

from helpers import pauli_string_matrix, qubit_operator_matrix, random_operator, random_pauli_string
from molvqd.errors import ContractViolation, DomainError, ResourceError
from molvqd.pauli import (
    DROP_TOL,
    IDENTITY,
    PauliString,
    QubitOperator,
    multiply,
    to_matrix,
    to_sparse,
)


def test_multiply_involution():
    x0 = PauliString([(0, "X")])
    string, phase = multiply(x0, x0)
    assert string == IDENTITY
    assert phase == 1.0


def test_multiply_single_qubit_rule():
    string, phase = multiply(PauliString([(0, "X")]), PauliString([(0, "Y")]))
    assert string == PauliString([(0, "Z")])
    assert phase == 1j


def test_multiply_two_qubit_against_matrix_oracle():
    a = PauliString([(0, "X"), (1, "Z")])
    b = PauliString([(0, "Y"), (1, "Z")])
    string, phase = multiply(a, b)
    assert string == PauliString([(0, "Z")])
    product = pauli_string_matrix(dict(a.ops), 2) @ pauli_string_matrix(dict(b.ops), 2)
    assert np.allclose(product, phase * pauli_string_matrix(dict(string.ops), 2))


@pytest.mark.parametrize("seed", range(5))
def test_multiply_matches_matrix_oracle_random(seed):
    rng = np.random.default_rng(seed)
    a = random_pauli_string(rng, 4)
    b = random_pauli_string(rng, 4)
    string, phase = multiply(a, b)
    expected = pauli_string_matrix(dict(a.ops), 4) @ pauli_string_matrix(dict(b.ops), 4)
    assert np.allclose(expected, phase * pauli_string_matrix(dict(string.ops), 4), atol=1e-12)


def test_multiply_with_adjoint_recovers_identity():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = random_pauli_string(rng, 5)
        string, phase = multiply(a, a)
        assert string == IDENTITY
        assert phase == 1.0  # strings are Hermitian and unitary


def test_reversed_product_carries_conjugate_phase():
    # (ab)^dagger = ba for Hermitian strings, so the reversed product is the
    # same string with the conjugated phase
    rng = np.random.default_rng(13)
    for _ in range(20):
        a = random_pauli_string(rng, 5)
        b = random_pauli_string(rng, 5)
        string_ab, phase_ab = multiply(a, b)
        string_ba, phase_ba = multiply(b, a)
        assert string_ba == string_ab
        assert phase_ba == np.conj(phase_ab)


def test_add_inverse_compresses_to_zero():
    rng = np.random.default_rng(0)
    op = random_operator(rng, 3, 6)
    zero = (op + op.scale(-1.0)).compress()
    assert zero.n_terms == 0


def test_z_squared_is_identity_operator():
    z0 = QubitOperator.from_term(PauliString([(0, "Z")]))
    assert (z0 * z0) == QubitOperator.identity()


def test_half_x_plus_half_y_squared():
    # (X/2 + Y/2)^2 = I/2: check against the dense 1-qubit oracle
    op = QubitOperator(
        {PauliString([(0, "X")]): 0.5, PauliString([(0, "Y")]): 0.5}
    )
    squared = (op * op).compress()
    expected = qubit_operator_matrix(op, 1) @ qubit_operator_matrix(op, 1)
    assert np.allclose(qubit_operator_matrix(squared, 1), expected, atol=1e-14)
    assert squared == QubitOperator.identity(0.5)


def test_to_matrix_z0():
    assert np.allclose(
        to_matrix(QubitOperator.from_term(PauliString([(0, "Z")])), 1),
        np.diag([1.0, -1.0]),
    )


def test_to_matrix_x0_on_two_qubits():
    m = to_matrix(QubitOperator.from_term(PauliString([(0, "X")])), 2)
    expected = np.zeros((4, 4))
    for row, col in ((0, 1), (1, 0), (2, 3), (3, 2)):
        expected[row, col] = 1.0
    assert np.allclose(m, expected)


@pytest.mark.parametrize("seed", range(4))
def test_to_matrix_homomorphism(seed):
    rng = np.random.default_rng(seed)
    a = random_operator(rng, 3, 5)
    b = random_operator(rng, 3, 5)
    left = to_matrix(a * b, 3)
    right = to_matrix(a, 3) @ to_matrix(b, 3)
    assert np.max(np.abs(left - right)) < 1e-12


def test_string_matrices_unitary_hermitian():
    rng = np.random.default_rng(11)
    for _ in range(10):
        string = random_pauli_string(rng, 4)
        m = to_matrix(QubitOperator.from_term(string), 4)
        assert np.allclose(m, m.conj().T)
        assert np.allclose(m @ m, np.eye(16))


def test_to_matrix_matches_kron_oracle():
    rng = np.random.default_rng(5)
    op = random_operator(rng, 4, 8)
    assert np.max(np.abs(to_matrix(op, 4) - qubit_operator_matrix(op, 4))) < 1e-13


def test_to_sparse_equals_dense():
    rng = np.random.default_rng(9)
    op = random_operator(rng, 5, 10)
    assert np.allclose(to_sparse(op, 5).toarray(), to_matrix(op, 5))


def test_compress_drop_tolerance():
    op = QubitOperator(
        {PauliString([(0, "X")]): 1.0, PauliString([(0, "Y")]): 0.5 * DROP_TOL}
    )
    assert op.compress().n_terms == 1


def test_hermiticity_checks():
    herm = QubitOperator({PauliString([(0, "X")]): 1.0})
    herm.require_hermitian()
    anti = QubitOperator({PauliString([(0, "X")]): 1.0j})
    anti.require_anti_hermitian()
    with pytest.raises(ContractViolation):
        anti.require_hermitian()
    with pytest.raises(ContractViolation):
        herm.require_anti_hermitian()


def test_adjoint_conjugates_coefficients():
    op = QubitOperator({PauliString([(0, "Y"), (2, "X")]): 1.0 + 2.0j})
    assert op.adjoint() == QubitOperator({PauliString([(0, "Y"), (2, "X")]): 1.0 - 2.0j})


def test_oversize_register_rejected():
    op = QubitOperator.from_term(PauliString([(0, "Z")]))
    with pytest.raises(ResourceError):
        to_sparse(op, 15)


def test_register_too_small_rejected():
    op = QubitOperator.from_term(PauliString([(3, "Z")]))
    with pytest.raises(DomainError):
        to_matrix(op, 2)


def test_string_validation():
    with pytest.raises(DomainError):
        PauliString([(0, "Q")])
    with pytest.raises(DomainError):
        PauliString([(-1, "X")])
    with pytest.raises(DomainError):
        PauliString([(0, "X"), (0, "Y")])


def test_rendering_is_sorted_and_stable():
    op = QubitOperator(
        {
            PauliString([(5, "Y"), (0, "X"), (3, "Z")]): 1.0,
            PauliString([(1, "Z")]): -0.25,
        }
    )
    text = str(op)
    assert "X0 Z3 Y5" in text
    assert text.index("X0") < text.index("Z1")  # lexicographic term order
    assert text == str(QubitOperator(dict(reversed(list(op.terms.items())))))
