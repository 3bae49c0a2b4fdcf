"""STO-3G basis data and contracted Gaussian shells.

Exponents and contraction coefficients are the standard STO-3G values
(Basis Set Exchange); coefficients refer to normalized primitives and each
contracted function is renormalized to unit self-overlap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ANGSTROM_TO_BOHR = 1.0 / 0.52917721092

ATOMIC_NUMBER = {"H": 1, "He": 2, "Li": 3, "Be": 4}

# element -> list of (shell type, [(exponent, coeff), ...])
STO3G = {
    "H": [
        ("S", [(3.425250914, 0.1543289673),
               (0.6239137298, 0.5353281423),
               (0.1688554040, 0.4446345422)]),
    ],
    "He": [
        ("S", [(6.362421394, 0.1543289673),
               (1.158922999, 0.5353281423),
               (0.3136497915, 0.4446345422)]),
    ],
    "Li": [
        ("S", [(16.11957475, 0.1543289673),
               (2.936200663, 0.5353281423),
               (0.7946504870, 0.4446345422)]),
        ("SP", [(0.6362897469, -0.09996722919, 0.1559162750),
                (0.1478600533, 0.3995128261, 0.6076837186),
                (0.04808867840, 0.7001154689, 0.3919573931)]),
    ],
    "Be": [
        ("S", [(30.16787069, 0.1543289673),
               (5.495115306, 0.5353281423),
               (1.487192653, 0.4446345422)]),
        ("SP", [(1.314833110, -0.09996722919, 0.1559162750),
                (0.3055389383, 0.3995128261, 0.6076837186),
                (0.09937074560, 0.7001154689, 0.3919573931)]),
    ],
}


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def primitive_norm(exponent: float, lmn: tuple[int, int, int]) -> float:
    i, j, k = lmn
    l = i + j + k
    num = (2.0 * exponent / np.pi) ** 1.5 * (4.0 * exponent) ** l
    den = (
        _double_factorial(2 * i - 1)
        * _double_factorial(2 * j - 1)
        * _double_factorial(2 * k - 1)
    )
    return float(np.sqrt(num / den))


@dataclass
class BasisFunction:
    """Contracted Cartesian Gaussian centered on an atom."""

    center: np.ndarray            # Bohr
    lmn: tuple[int, int, int]
    exponents: np.ndarray
    coefficients: np.ndarray      # includes primitive norms and contraction norm

    def __post_init__(self):
        norms = np.array([primitive_norm(a, self.lmn) for a in self.exponents])
        coeffs = self.coefficients * norms
        # renormalize the contracted function to unit self overlap
        la = sum(self.lmn)
        pref = (
            _double_factorial(2 * self.lmn[0] - 1)
            * _double_factorial(2 * self.lmn[1] - 1)
            * _double_factorial(2 * self.lmn[2] - 1)
        )
        s_self = 0.0
        for ca, aa in zip(coeffs, self.exponents):
            for cb, ab in zip(coeffs, self.exponents):
                p = aa + ab
                s_self += ca * cb * pref * (np.pi / p) ** 1.5 / (2.0 * p) ** la
        self.coefficients = coeffs / np.sqrt(s_self)


def build_basis(atoms: list[tuple[str, np.ndarray]]) -> list[BasisFunction]:
    """Basis functions for atoms given as (element, xyz in Bohr).

    P shells expand to x, y, z components in that order.
    """
    functions: list[BasisFunction] = []
    for element, center in atoms:
        if element not in STO3G:
            raise ValueError(f"no STO-3G data for element {element!r}")
        for shell in STO3G[element]:
            kind = shell[0]
            rows = shell[1]
            exponents = np.array([row[0] for row in rows])
            if kind == "S":
                coeffs = np.array([row[1] for row in rows])
                functions.append(BasisFunction(center, (0, 0, 0), exponents, coeffs.copy()))
            elif kind == "SP":
                s_coeffs = np.array([row[1] for row in rows])
                p_coeffs = np.array([row[2] for row in rows])
                functions.append(BasisFunction(center, (0, 0, 0), exponents, s_coeffs.copy()))
                for lmn in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                    functions.append(BasisFunction(center, lmn, exponents, p_coeffs.copy()))
            else:
                raise ValueError(f"unsupported shell type {kind!r}")
    return functions
