"""Molecular integrals over contracted Cartesian Gaussians.

McMurchie-Davidson scheme: products of Gaussians are expanded in Hermite
Gaussians (coefficients E), Coulomb-type integrals contract those against
Hermite Coulomb integrals R built from Boys functions.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gamma, gammainc

from .basis import BasisFunction


def boys(m: int, t: float) -> float:
    if t < 1e-11:
        return 1.0 / (2 * m + 1) - t / (2 * m + 3)
    return gammainc(m + 0.5, t) * gamma(m + 0.5) / (2.0 * t ** (m + 0.5))


def hermite_expansion(la: int, lb: int, ab_dist: float, a: float, b: float) -> np.ndarray:
    """E[i, j, t] coefficients along one Cartesian direction."""
    p = a + b
    mu = a * b / p
    table = np.zeros((la + 1, lb + 1, la + lb + 2))
    table[0, 0, 0] = np.exp(-mu * ab_dist * ab_dist)

    def get(i, j, t):
        if t < 0 or t > i + j:
            return 0.0
        return table[i, j, t]

    for i in range(la + 1):
        for j in range(lb + 1):
            if i == 0 and j == 0:
                continue
            for t in range(i + j + 1):
                if j == 0:
                    table[i, j, t] = (
                        get(i - 1, j, t - 1) / (2 * p)
                        - (mu * ab_dist / a) * get(i - 1, j, t)
                        + (t + 1) * get(i - 1, j, t + 1)
                    )
                else:
                    table[i, j, t] = (
                        get(i, j - 1, t - 1) / (2 * p)
                        + (mu * ab_dist / b) * get(i, j - 1, t)
                        + (t + 1) * get(i, j - 1, t + 1)
                    )
    return table


def hermite_coulomb(tmax: int, umax: int, vmax: int, p: float, pc: np.ndarray) -> np.ndarray:
    """R[t, u, v] Hermite Coulomb integrals at order n = 0."""
    t2 = p * float(pc @ pc)
    nmax = tmax + umax + vmax
    base = np.array([(-2.0 * p) ** n * boys(n, t2) for n in range(nmax + 1)])
    table = np.zeros((tmax + 1, umax + 1, vmax + 1, nmax + 1))
    table[0, 0, 0, :] = base

    def get(t, u, v, n):
        if t < 0 or u < 0 or v < 0:
            return 0.0
        return table[t, u, v, n]

    for total in range(1, nmax + 1):
        for t in range(min(total, tmax) + 1):
            for u in range(min(total - t, umax) + 1):
                v = total - t - u
                if v < 0 or v > vmax:
                    continue
                for n in range(nmax - total + 1):
                    if t > 0:
                        val = (t - 1) * get(t - 2, u, v, n + 1) + pc[0] * get(t - 1, u, v, n + 1)
                    elif u > 0:
                        val = (u - 1) * get(t, u - 2, v, n + 1) + pc[1] * get(t, u - 1, v, n + 1)
                    else:
                        val = (v - 1) * get(t, u, v - 2, n + 1) + pc[2] * get(t, u, v - 1, n + 1)
                    table[t, u, v, n] = val
    return table[:, :, :, 0]


def _prim_overlap(a, lmn1, ra, b, lmn2, rb) -> float:
    p = a + b
    value = (np.pi / p) ** 1.5
    for axis in range(3):
        e = hermite_expansion(lmn1[axis], lmn2[axis], ra[axis] - rb[axis], a, b)
        value *= e[lmn1[axis], lmn2[axis], 0]
    return value


def _prim_kinetic(a, lmn1, ra, b, lmn2, rb) -> float:
    l2, m2, n2 = lmn2

    def shifted(dx, dy, dz):
        lmn = (l2 + dx, m2 + dy, n2 + dz)
        if min(lmn) < 0:
            return 0.0
        return _prim_overlap(a, lmn1, ra, b, lmn, rb)

    term0 = b * (2 * (l2 + m2 + n2) + 3) * shifted(0, 0, 0)
    term1 = -2.0 * b * b * (shifted(2, 0, 0) + shifted(0, 2, 0) + shifted(0, 0, 2))
    term2 = -0.5 * (
        l2 * (l2 - 1) * shifted(-2, 0, 0)
        + m2 * (m2 - 1) * shifted(0, -2, 0)
        + n2 * (n2 - 1) * shifted(0, 0, -2)
    )
    return term0 + term1 + term2


def _prim_nuclear(a, lmn1, ra, b, lmn2, rb, rc) -> float:
    p = a + b
    rp = (a * ra + b * rb) / p
    ex = hermite_expansion(lmn1[0], lmn2[0], ra[0] - rb[0], a, b)
    ey = hermite_expansion(lmn1[1], lmn2[1], ra[1] - rb[1], a, b)
    ez = hermite_expansion(lmn1[2], lmn2[2], ra[2] - rb[2], a, b)
    tmax, umax, vmax = lmn1[0] + lmn2[0], lmn1[1] + lmn2[1], lmn1[2] + lmn2[2]
    r = hermite_coulomb(tmax, umax, vmax, p, rp - rc)
    value = 0.0
    for t in range(tmax + 1):
        for u in range(umax + 1):
            for v in range(vmax + 1):
                value += (
                    ex[lmn1[0], lmn2[0], t]
                    * ey[lmn1[1], lmn2[1], u]
                    * ez[lmn1[2], lmn2[2], v]
                    * r[t, u, v]
                )
    return 2.0 * np.pi / p * value


def _prim_eri(a, lmn1, ra, b, lmn2, rb, c, lmn3, rc, d, lmn4, rd) -> float:
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    rp = (a * ra + b * rb) / p
    rq = (c * rc + d * rd) / q

    e1 = [hermite_expansion(lmn1[ax], lmn2[ax], ra[ax] - rb[ax], a, b) for ax in range(3)]
    e2 = [hermite_expansion(lmn3[ax], lmn4[ax], rc[ax] - rd[ax], c, d) for ax in range(3)]
    tmax = [lmn1[ax] + lmn2[ax] for ax in range(3)]
    smax = [lmn3[ax] + lmn4[ax] for ax in range(3)]
    r = hermite_coulomb(
        tmax[0] + smax[0], tmax[1] + smax[1], tmax[2] + smax[2], alpha, rp - rq
    )
    value = 0.0
    for t in range(tmax[0] + 1):
        c1x = e1[0][lmn1[0], lmn2[0], t]
        for u in range(tmax[1] + 1):
            c1y = e1[1][lmn1[1], lmn2[1], u]
            for v in range(tmax[2] + 1):
                c1 = c1x * c1y * e1[2][lmn1[2], lmn2[2], v]
                if c1 == 0.0:
                    continue
                for tau in range(smax[0] + 1):
                    c2x = e2[0][lmn3[0], lmn4[0], tau]
                    for nu in range(smax[1] + 1):
                        c2y = e2[1][lmn3[1], lmn4[1], nu]
                        for phi in range(smax[2] + 1):
                            c2 = c2x * c2y * e2[2][lmn3[2], lmn4[2], phi]
                            if c2 == 0.0:
                                continue
                            sign = -1.0 if (tau + nu + phi) % 2 else 1.0
                            value += c1 * c2 * sign * r[t + tau, u + nu, v + phi]
    return value * 2.0 * np.pi ** 2.5 / (p * q * np.sqrt(p + q))


def _contract2(f, bf1: BasisFunction, bf2: BasisFunction, *extra) -> float:
    value = 0.0
    for ca, aa in zip(bf1.coefficients, bf1.exponents):
        for cb, ab in zip(bf2.coefficients, bf2.exponents):
            value += ca * cb * f(aa, bf1.lmn, bf1.center, ab, bf2.lmn, bf2.center, *extra)
    return value


def overlap_matrix(basis: list[BasisFunction]) -> np.ndarray:
    n = len(basis)
    s = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            s[i, j] = s[j, i] = _contract2(_prim_overlap, basis[i], basis[j])
    return s


def kinetic_matrix(basis: list[BasisFunction]) -> np.ndarray:
    n = len(basis)
    t = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            t[i, j] = t[j, i] = _contract2(_prim_kinetic, basis[i], basis[j])
    return t


def nuclear_matrix(basis: list[BasisFunction], charges: list[tuple[float, np.ndarray]]) -> np.ndarray:
    n = len(basis)
    v = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            total = 0.0
            for z, rc in charges:
                total -= z * _contract2(_prim_nuclear, basis[i], basis[j], rc)
            v[i, j] = v[j, i] = total
    return v


def eri_tensor(basis: list[BasisFunction]) -> np.ndarray:
    """Two-electron integrals (ij|kl) in chemists' notation, 8-fold symmetric."""
    n = len(basis)
    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(i + 1):
                for l in range(k + 1):
                    kl = k * (k + 1) // 2 + l
                    if kl > ij:
                        continue
                    value = 0.0
                    b1, b2, b3, b4 = basis[i], basis[j], basis[k], basis[l]
                    for c1, a1 in zip(b1.coefficients, b1.exponents):
                        for c2, a2 in zip(b2.coefficients, b2.exponents):
                            for c3, a3 in zip(b3.coefficients, b3.exponents):
                                for c4, a4 in zip(b4.coefficients, b4.exponents):
                                    value += c1 * c2 * c3 * c4 * _prim_eri(
                                        a1, b1.lmn, b1.center,
                                        a2, b2.lmn, b2.center,
                                        a3, b3.lmn, b3.center,
                                        a4, b4.lmn, b4.center,
                                    )
                    for p, q, r, s in (
                        (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                        (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
                    ):
                        eri[p, q, r, s] = value
    return eri
