"""Spin-restricted operator pools over spatial orbitals.

Two flavors:

* sUpCCGSD: generalized singles plus paired doubles (pair transfers
  p^2 -> r^2), n(n-1)/2 of each.
* sUCCGSD: the singles and pair transfers above plus one mixed-spin double
  for every unordered pair of distinct spatial index pairs {(p<q), (r<s)}.

The sUCCGSD doubles enumeration keeps exactly one generator per index
class; classes whose two index pairs coincide are excluded as identically
zero.  For six orbitals this yields 15 + 15 + 105 = 135 operators carrying
1860 Pauli strings under the Jordan-Wigner transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .errors import DomainError
from .fermion import ExcitationGenerator, GeneratorKind, make_generator


class PoolFlavor(Enum):
    SUCCGSD = "sUCCGSD"
    SUPCCGSD = "sUpCCGSD"


@dataclass(frozen=True)
class OperatorPool:
    """Deterministically ordered pool of excitation generators.

    Singles come first ascending, then doubles ascending by canonical index
    tuple (pair transfers sort as (p, p, r, r)).  Operators are reusable:
    adaptive growth may select the same entry any number of times.
    """

    flavor: PoolFlavor
    n_orb: int
    generators: tuple[ExcitationGenerator, ...]

    @property
    def n_ops(self) -> int:
        return len(self.generators)

    @property
    def n_pauli_strings(self) -> int:
        """Total Pauli-gadget count over all generators."""
        return sum(g.n_pauli_strings for g in self.generators)

    def naive_cx_count(self) -> int:
        """Uncompiled ladder estimate: 2 (weight - 1) CX gates per gadget."""
        return sum(
            2 * (string.weight - 1)
            for g in self.generators
            for string in g.qubit.terms
        )

    def listing(self) -> str:
        lines = [f"{self.flavor.value} pool, n_orb={self.n_orb}, {self.n_ops} operators"]
        for i, gen in enumerate(self.generators):
            lines.append(
                f"{i:4d}  {gen.kind.value}{gen.indices}  strings={gen.n_pauli_strings}"
            )
        return "\n".join(lines) + "\n"


def _double_sort_key(gen: ExcitationGenerator) -> tuple[int, ...]:
    if gen.kind is GeneratorKind.PAIRED:
        p, r = gen.indices
        return (p, p, r, r)
    return gen.indices


def build_pool(flavor: PoolFlavor | str, n_orb: int) -> OperatorPool:
    """Complete canonical enumeration of the requested pool."""
    flavor = PoolFlavor(flavor)
    if n_orb < 2:
        raise DomainError(f"pools need at least 2 spatial orbitals, got {n_orb}")

    singles = [
        make_generator(GeneratorKind.SINGLE, (p, r))
        for p, r in combinations(range(n_orb), 2)
    ]
    doubles: list[ExcitationGenerator] = [
        make_generator(GeneratorKind.PAIRED, (p, r))
        for p, r in combinations(range(n_orb), 2)
    ]
    if flavor is PoolFlavor.SUCCGSD:
        pairs = list(combinations(range(n_orb), 2))
        for a, b in combinations(pairs, 2):
            (p, q), (r, s) = sorted((a, b))
            doubles.append(make_generator(GeneratorKind.DOUBLE, (p, q, r, s)))
    doubles.sort(key=_double_sort_key)
    return OperatorPool(flavor, n_orb, tuple(singles) + tuple(doubles))
