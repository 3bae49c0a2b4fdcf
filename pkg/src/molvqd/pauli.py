"""Pauli-string algebra and qubit operators.

Bit convention (fixed package-wide): qubit ``q`` occupies bit ``q`` of the
basis-state index, so qubit 0 is the least-significant bit.  A reference
determinant with spin orbitals 0 and 1 occupied is the integer index 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np
import scipy.sparse as sp

from .errors import ContractViolation, DomainError, ResourceError

#: coefficients below this magnitude are dropped by compress()
DROP_TOL = 1e-12

#: dense/sparse materialization refuses registers larger than this
MAX_QUBITS = 14

# single-qubit products: (a, b) -> (a*b, phase)
_PROD = {
    ("X", "X"): ("I", 1.0), ("Y", "Y"): ("I", 1.0), ("Z", "Z"): ("I", 1.0),
    ("X", "Y"): ("Z", 1j), ("Y", "X"): ("Z", -1j),
    ("Y", "Z"): ("X", 1j), ("Z", "Y"): ("X", -1j),
    ("Z", "X"): ("Y", 1j), ("X", "Z"): ("Y", -1j),
}


class PauliString:
    """Tensor product of single-qubit Paulis, identity on unlisted qubits.

    Immutable and hashable; the empty string is the identity.
    """

    __slots__ = ("_ops",)

    def __init__(self, ops: Mapping[int, str] | Iterable[tuple[int, str]] = ()):
        items = ops.items() if isinstance(ops, Mapping) else ops
        cleaned = []
        for qubit, axis in items:
            if axis == "I":
                continue
            if axis not in ("X", "Y", "Z"):
                raise DomainError(f"unknown Pauli axis {axis!r}")
            if qubit < 0:
                raise DomainError(f"negative qubit index {qubit}")
            cleaned.append((int(qubit), axis))
        cleaned.sort()
        for (q1, _), (q2, _) in zip(cleaned, cleaned[1:]):
            if q1 == q2:
                raise DomainError(f"duplicate qubit index {q1}")
        self._ops = tuple(cleaned)

    @property
    def ops(self) -> tuple[tuple[int, str], ...]:
        return self._ops

    def axis(self, qubit: int) -> str:
        for q, ax in self._ops:
            if q == qubit:
                return ax
        return "I"

    @property
    def weight(self) -> int:
        return len(self._ops)

    @property
    def max_qubit(self) -> int:
        """Largest qubit index touched; -1 for the identity string."""
        return self._ops[-1][0] if self._ops else -1

    def __iter__(self) -> Iterator[tuple[int, str]]:
        return iter(self._ops)

    def __len__(self) -> int:
        return len(self._ops)

    def __hash__(self) -> int:
        return hash(self._ops)

    def __eq__(self, other) -> bool:
        return isinstance(other, PauliString) and self._ops == other._ops

    def __lt__(self, other: "PauliString") -> bool:
        return self._ops < other._ops

    def __repr__(self) -> str:
        return f"PauliString({self._ops!r})"

    def __str__(self) -> str:
        if not self._ops:
            return "I"
        return " ".join(f"{ax}{q}" for q, ax in self._ops)


IDENTITY = PauliString()


def multiply(a: PauliString, b: PauliString) -> tuple[PauliString, complex]:
    """Product of two Pauli strings: returns (c, phase) with a·b = phase·c."""
    phase = 1.0 + 0j
    out = []
    ia, ib = 0, 0
    oa, ob = a.ops, b.ops
    while ia < len(oa) and ib < len(ob):
        qa, axa = oa[ia]
        qb, axb = ob[ib]
        if qa < qb:
            out.append((qa, axa))
            ia += 1
        elif qb < qa:
            out.append((qb, axb))
            ib += 1
        else:
            if axa == axb:
                pass  # P^2 = I
            else:
                ax, ph = _PROD[(axa, axb)]
                phase *= ph
                out.append((qa, ax))
            ia += 1
            ib += 1
    out.extend(oa[ia:])
    out.extend(ob[ib:])
    return PauliString(out), phase


@dataclass(frozen=True)
class QubitOperator:
    """Linear combination of Pauli strings with complex coefficients.

    Treated as immutable: all algebra returns new instances.  Terms iterate
    in lexicographic (qubit, axis) order for reproducible output.
    """

    terms: dict[PauliString, complex]

    @classmethod
    def zero(cls) -> "QubitOperator":
        return cls({})

    @classmethod
    def identity(cls, coeff: complex = 1.0) -> "QubitOperator":
        return cls({IDENTITY: complex(coeff)})

    @classmethod
    def from_term(cls, string: PauliString, coeff: complex = 1.0) -> "QubitOperator":
        return cls({string: complex(coeff)})

    def __add__(self, other: "QubitOperator") -> "QubitOperator":
        terms = dict(self.terms)
        for string, coeff in other.terms.items():
            terms[string] = terms.get(string, 0.0) + coeff
        return QubitOperator(terms)

    def __sub__(self, other: "QubitOperator") -> "QubitOperator":
        return self + other.scale(-1.0)

    def __mul__(self, other: "QubitOperator") -> "QubitOperator":
        terms: dict[PauliString, complex] = {}
        for sa, ca in self.terms.items():
            for sb, cb in other.terms.items():
                string, phase = multiply(sa, sb)
                terms[string] = terms.get(string, 0.0) + ca * cb * phase
        return QubitOperator(terms)

    def scale(self, factor: complex) -> "QubitOperator":
        return QubitOperator({s: c * factor for s, c in self.terms.items()})

    def compress(self, tol: float = DROP_TOL) -> "QubitOperator":
        return QubitOperator({s: c for s, c in self.terms.items() if abs(c) > tol})

    def adjoint(self) -> "QubitOperator":
        # Pauli strings are Hermitian, so only coefficients conjugate.
        return QubitOperator({s: c.conjugate() for s, c in self.terms.items()})

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return all(abs(c.imag) <= tol for c in self.terms.values())

    def is_anti_hermitian(self, tol: float = 1e-10) -> bool:
        return all(abs(c.real) <= tol for c in self.terms.values())

    def require_hermitian(self, what: str = "operator") -> None:
        if not self.is_hermitian():
            raise ContractViolation(f"{what} is not Hermitian")

    def require_anti_hermitian(self, what: str = "operator") -> None:
        if not self.is_anti_hermitian():
            raise ContractViolation(f"{what} is not anti-Hermitian")

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @property
    def max_qubit(self) -> int:
        return max((s.max_qubit for s in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[PauliString, complex]]:
        return sorted(self.terms.items(), key=lambda item: item[0].ops)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for string, coeff in self.sorted_terms():
            if coeff.imag == 0.0:
                c = f"{coeff.real:+.12g}"
            elif coeff.real == 0.0:
                c = f"{coeff.imag:+.12g}i"
            else:
                c = f"+({coeff.real:.12g}{coeff.imag:+.12g}i)"
            parts.append(f"{c} · {string}")
        return "  ".join(parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QubitOperator):
            return NotImplemented
        diff = (self - other).compress()
        return not diff.terms

    def __hash__(self):
        raise TypeError("QubitOperator is not hashable")


def _parity(x: np.ndarray) -> np.ndarray:
    """Bit parity of each entry of a nonnegative integer array."""
    x = x.astype(np.uint64, copy=True)
    for shift in (32, 16, 8, 4, 2, 1):
        x ^= x >> np.uint64(shift)
    return (x & np.uint64(1)).astype(np.int8)


def _string_action(string: PauliString, n_qubits: int) -> tuple[int, np.ndarray]:
    """Action of a string on basis states: P|i> = phase[i] · |i ^ flip>."""
    flip = 0
    yz_mask = 0
    n_y = 0
    for qubit, axis in string:
        if axis in ("X", "Y"):
            flip |= 1 << qubit
        if axis in ("Y", "Z"):
            yz_mask |= 1 << qubit
        if axis == "Y":
            n_y += 1
    idx = np.arange(1 << n_qubits, dtype=np.uint64)
    phase = (1j) ** (n_y % 4) * np.where(_parity(idx & np.uint64(yz_mask)), -1.0, 1.0)
    return flip, phase.astype(np.complex128)


def _check_register(op: QubitOperator, n_qubits: int) -> None:
    if n_qubits < op.max_qubit + 1:
        raise DomainError(
            f"operator touches qubit {op.max_qubit} but register has {n_qubits}"
        )
    if n_qubits > MAX_QUBITS:
        raise ResourceError(f"register of {n_qubits} qubits exceeds the {MAX_QUBITS}-qubit limit")


def to_sparse(op: QubitOperator, n_qubits: int) -> sp.csr_matrix:
    """CSR matrix of the operator on ``n_qubits`` (qubit 0 = LSB)."""
    _check_register(op, n_qubits)
    dim = 1 << n_qubits
    cols_all = []
    rows_all = []
    data_all = []
    base = np.arange(dim, dtype=np.int64)
    for string, coeff in op.sorted_terms():
        flip, phase = _string_action(string, n_qubits)
        cols_all.append(base)
        rows_all.append(base ^ flip)
        data_all.append(coeff * phase)
    if not data_all:
        return sp.csr_matrix((dim, dim), dtype=np.complex128)
    rows = np.concatenate(rows_all)
    cols = np.concatenate(cols_all)
    data = np.concatenate(data_all)
    return sp.coo_matrix((data, (rows, cols)), shape=(dim, dim)).tocsr()


def to_matrix(op: QubitOperator, n_qubits: int) -> np.ndarray:
    """Dense matrix of the operator; intended for small registers."""
    return to_sparse(op, n_qubits).toarray()
