"""Independent oracles used across the test suite.

Everything here is built from first principles (kron products and
occupation-number bookkeeping) so it never touches the package's own
Pauli/Jordan-Wigner code paths.
"""

from __future__ import annotations

import numpy as np

PAULI_2X2 = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_string_matrix(ops, n_qubits: int) -> np.ndarray:
    """Dense matrix of a Pauli string given as {qubit: axis}; qubit 0 = LSB."""
    axes = dict(ops)
    matrix = np.eye(1, dtype=complex)
    for qubit in range(n_qubits):
        # qubit 0 least significant -> it is the rightmost kron factor
        matrix = np.kron(PAULI_2X2[axes.get(qubit, "I")], matrix)
    return matrix


def qubit_operator_matrix(op, n_qubits: int) -> np.ndarray:
    """Dense matrix of a QubitOperator via the independent kron oracle."""
    total = np.zeros((1 << n_qubits, 1 << n_qubits), dtype=complex)
    for string, coeff in op.terms.items():
        total += coeff * pauli_string_matrix(dict(string.ops), n_qubits)
    return total


def ladder_matrix(mode: int, dagger: bool, n_modes: int) -> np.ndarray:
    """Fermionic creation/annihilation matrix in the occupation basis.

    Sign convention: a_j |n> = (-1)^(sum_{k<j} n_k) n_j |n - e_j>, matching
    mode 0 as the least significant bit.
    """
    dim = 1 << n_modes
    matrix = np.zeros((dim, dim), dtype=complex)
    bit = 1 << mode
    for col in range(dim):
        occupied = bool(col & bit)
        if dagger == occupied:
            continue
        row = col | bit if dagger else col & ~bit
        sign = (-1) ** bin(col & (bit - 1)).count("1")
        matrix[row, col] = sign
    return matrix


def fermion_term_matrix(term, n_modes: int) -> np.ndarray:
    """Dense matrix of a FermionTerm product via ladder matrices."""
    matrix = np.eye(1 << n_modes, dtype=complex) * term.coeff
    for mode, dag in term.factors:
        matrix = matrix @ ladder_matrix(mode, dag, n_modes)
    return matrix


def fermion_sum_matrix(terms, n_modes: int) -> np.ndarray:
    total = np.zeros((1 << n_modes, 1 << n_modes), dtype=complex)
    for term in terms:
        total += fermion_term_matrix(term, n_modes)
    return total


def central_difference(f, x, h: float = 1e-5) -> np.ndarray:
    """Central finite-difference gradient of a scalar function."""
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        grad[i] = (f(x + step) - f(x - step)) / (2.0 * h)
    return grad


def random_pauli_string(rng, n_qubits: int, max_weight: int | None = None):
    """Random PauliString on up to n_qubits (package type, random content)."""
    from molvqd.pauli import PauliString

    weight = rng.integers(0, (max_weight or n_qubits) + 1)
    qubits = rng.choice(n_qubits, size=weight, replace=False)
    return PauliString([(int(q), "XYZ"[rng.integers(3)]) for q in qubits])


def random_operator(rng, n_qubits: int, n_terms: int, hermitian: bool = False):
    from molvqd.pauli import QubitOperator

    terms = {}
    for _ in range(n_terms):
        string = random_pauli_string(rng, n_qubits)
        coeff = complex(rng.normal(), 0.0 if hermitian else rng.normal())
        terms[string] = terms.get(string, 0.0) + coeff
    return QubitOperator(terms)
