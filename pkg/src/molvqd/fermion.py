"""Fermionic operators, Jordan-Wigner mapping, and excitation generators.

Spin-orbital convention (fixed package-wide): spatial orbital ``p`` owns the
interleaved spin orbitals ``2p`` (alpha) and ``2p+1`` (beta), so the
closed-shell two-electron reference on four spin orbitals is the qubit
occupation 1100 (qubits 0 and 1 set).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable

from .errors import DomainError
from .integrals import MolecularIntegrals
from .pauli import PauliString, QubitOperator

INTEGRAL_CUTOFF = 1e-12


def alpha(p: int) -> int:
    return 2 * p


def beta(p: int) -> int:
    return 2 * p + 1


@dataclass(frozen=True)
class FermionTerm:
    """Scalar multiple of an ordered product of ladder operators.

    ``factors`` lists (spin-orbital index, dagger flag) left to right.
    """

    factors: tuple[tuple[int, bool], ...]
    coeff: complex = 1.0

    def adjoint(self) -> "FermionTerm":
        flipped = tuple((mode, not dag) for mode, dag in reversed(self.factors))
        return FermionTerm(flipped, self.coeff.conjugate())

    def scaled(self, factor: complex) -> "FermionTerm":
        return FermionTerm(self.factors, self.coeff * factor)

    @property
    def modes(self) -> frozenset[int]:
        return frozenset(mode for mode, _ in self.factors)

    def __str__(self) -> str:
        ops = " ".join(f"a{mode}^" if dag else f"a{mode}" for mode, dag in self.factors)
        return f"({self.coeff}) {ops}"


@lru_cache(maxsize=None)
def _jw_ladder(mode: int, dagger: bool) -> QubitOperator:
    """a_j or a_j^dagger as half (X -+ iY) on j with a Z chain on qubits below."""
    zs = tuple((k, "Z") for k in range(mode))
    x_string = PauliString(zs + ((mode, "X"),))
    y_string = PauliString(zs + ((mode, "Y"),))
    y_coeff = -0.5j if dagger else 0.5j
    return QubitOperator({x_string: 0.5, y_string: y_coeff})


def jw_transform(terms: FermionTerm | Iterable[FermionTerm]) -> QubitOperator:
    """Jordan-Wigner image of a fermionic term or sum of terms, compressed."""
    if isinstance(terms, FermionTerm):
        terms = (terms,)
    total = QubitOperator.zero()
    for term in terms:
        product = QubitOperator.identity(term.coeff)
        for mode, dagger in term.factors:
            product = product * _jw_ladder(mode, dagger)
        total = total + product
    return total.compress()


def _one_body(p: int, q: int, coeff: complex = 1.0) -> FermionTerm:
    return FermionTerm(((p, True), (q, False)), coeff)


def build_hamiltonian(mol: MolecularIntegrals) -> QubitOperator:
    """Qubit Hamiltonian of the molecule on ``2 * n_orb`` qubits.

    Spin-orbital integrals are expanded from the spatial tensors (same-spin
    pairing within each electron), the two-electron part is assembled as
    (1/2) sum (pq|rs) a^_ps a^_rt a_st a_qs over spin labels s,t, and the
    whole sum is Jordan-Wigner transformed and compressed.
    """
    n = mol.n_orb
    terms: list[FermionTerm] = [FermionTerm((), mol.e_nuc)]
    for p in range(n):
        for q in range(n):
            h = mol.h1[p, q]
            if abs(h) < INTEGRAL_CUTOFF:
                continue
            for sigma in (0, 1):
                terms.append(_one_body(2 * p + sigma, 2 * q + sigma, h))
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    g = mol.h2[p, q, r, s]
                    if abs(g) < INTEGRAL_CUTOFF:
                        continue
                    for sigma in (0, 1):
                        for tau in (0, 1):
                            terms.append(
                                FermionTerm(
                                    (
                                        (2 * p + sigma, True),
                                        (2 * r + tau, True),
                                        (2 * s + tau, False),
                                        (2 * q + sigma, False),
                                    ),
                                    0.5 * g,
                                )
                            )
    return jw_transform(terms)


def build_sz(n_orb: int) -> QubitOperator:
    """S_z = (1/2) sum_p (n_p_alpha - n_p_beta), Jordan-Wigner transformed."""
    terms = []
    for p in range(n_orb):
        terms.append(_one_body(alpha(p), alpha(p), 0.5))
        terms.append(_one_body(beta(p), beta(p), -0.5))
    return jw_transform(terms)


def build_s2(n_orb: int) -> QubitOperator:
    """Total-spin operator S^2 = S_minus S_plus + S_z (S_z + 1)."""
    s_plus = jw_transform([_one_body(alpha(p), beta(p)) for p in range(n_orb)])
    s_minus = s_plus.adjoint()
    sz = build_sz(n_orb)
    identity = QubitOperator.identity(1.0)
    return (s_minus * s_plus + sz * (sz + identity)).compress()


def build_number(n_orb: int) -> QubitOperator:
    """Total particle-number operator over all spin orbitals."""
    return jw_transform(
        [_one_body(m, m) for m in range(2 * n_orb)]
    )


class GeneratorKind(str, Enum):
    SINGLE = "generalized-single"
    DOUBLE = "generalized-double"
    PAIRED = "paired-double"


@dataclass(frozen=True)
class ExcitationGenerator:
    """Anti-Hermitian spin-restricted excitation generator.

    ``components`` splits the Jordan-Wigner form into parts of shape
    tau - tau^dagger for a single normal-ordered product tau, so each part
    K satisfies K^3 = -K.  When ``components_commute`` the exact exponential
    factorizes over the components.
    """

    kind: GeneratorKind
    indices: tuple[int, ...]
    terms: tuple[FermionTerm, ...]
    qubit: QubitOperator
    components: tuple[QubitOperator, ...]
    components_commute: bool

    @property
    def n_pauli_strings(self) -> int:
        return self.qubit.n_terms

    @property
    def max_qubit(self) -> int:
        return self.qubit.max_qubit

    def label(self) -> str:
        return f"{self.kind.value}{self.indices}"


def _anti_hermitian_parts(products: list[FermionTerm]) -> tuple[tuple, tuple, bool]:
    """Terms, JW components and commutation flag for sum_i (tau_i - tau_i^dag)."""
    terms: list[FermionTerm] = []
    components: list[QubitOperator] = []
    mode_sets: list[frozenset[int]] = []
    for tau in products:
        pair = (tau, tau.adjoint().scaled(-1.0))
        terms.extend(pair)
        components.append(jw_transform(pair))
        mode_sets.append(tau.modes)
    commute = all(
        mode_sets[i].isdisjoint(mode_sets[j])
        for i in range(len(mode_sets))
        for j in range(i + 1, len(mode_sets))
    )
    return tuple(terms), tuple(components), commute


def make_generator(kind: GeneratorKind | str, indices: Iterable[int]) -> ExcitationGenerator:
    """Construct a spin-restricted excitation generator.

    * single (p, r), p < r: sum_s a^_rs a_ps - h.c. over both spins.
    * paired (p, r), p < r: a^_ra a^_rb a_pb a_pa - h.c. (pair transfer).
    * double (p, q, r, s): moves the electron pair (p, q) to (r, s) with one
      alpha and one beta channel plus the spin-flipped image; requires
      p < q, r < s and (p, q) < (r, s).  The channel assignment pairs p with
      r and q with s unless that repeats a spin orbital, in which case the
      swapped pairing (p with s, q with r) is used; the two assignments give
      the only four-mode products free of number-operator contractions.
    """
    kind = GeneratorKind(kind)
    idx = tuple(int(i) for i in indices)
    if any(i < 0 for i in idx):
        raise DomainError(f"negative orbital index in {idx}")

    if kind in (GeneratorKind.SINGLE, GeneratorKind.PAIRED):
        if len(idx) != 2 or idx[0] >= idx[1]:
            raise DomainError(f"{kind.value} needs indices p < r, got {idx}")
        p, r = idx
        if kind is GeneratorKind.SINGLE:
            products = [
                FermionTerm(((alpha(r), True), (alpha(p), False))),
                FermionTerm(((beta(r), True), (beta(p), False))),
            ]
        else:
            products = [
                FermionTerm(
                    ((alpha(r), True), (beta(r), True), (beta(p), False), (alpha(p), False))
                )
            ]
    else:
        if len(idx) != 4:
            raise DomainError(f"generalized double needs 4 indices, got {idx}")
        p, q, r, s = idx
        if not (p < q and r < s and (p, q) < (r, s)):
            raise DomainError(
                f"generalized double needs p < q, r < s, (p, q) < (r, s), got {idx}"
            )
        x, y = (r, s) if (p != r and q != s) else (s, r)
        products = [
            FermionTerm(
                ((alpha(x), True), (beta(y), True), (beta(q), False), (alpha(p), False))
            ),
            FermionTerm(
                ((beta(x), True), (alpha(y), True), (alpha(q), False), (beta(p), False))
            ),
        ]

    terms, components, commute = _anti_hermitian_parts(products)
    qubit = jw_transform(terms)
    qubit.require_anti_hermitian("excitation generator")
    return ExcitationGenerator(
        kind=kind,
        indices=idx,
        terms=terms,
        qubit=qubit,
        components=components,
        components_commute=commute,
    )
