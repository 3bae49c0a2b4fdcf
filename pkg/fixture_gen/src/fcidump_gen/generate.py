"""RHF solution and FCIDUMP export for small closed-shell molecules."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from molvqd.integrals import MolecularIntegrals, write_fcidump

from .basis import ANGSTROM_TO_BOHR, ATOMIC_NUMBER, build_basis
from .integrals import eri_tensor, kinetic_matrix, nuclear_matrix, overlap_matrix


class ScfError(RuntimeError):
    """Self-consistent field iteration failed to converge."""


@dataclass
class GeometrySpec:
    """Molecule description: element symbols with coordinates in Angstrom."""

    atoms: list[tuple[str, tuple[float, float, float]]]
    basis: str = "sto-3g"
    charge: int = 0
    multiplicity: int = 1
    name: str = "molecule"

    def __post_init__(self):
        if self.basis.lower() != "sto-3g":
            raise ValueError(f"only the STO-3G basis is supported, got {self.basis!r}")
        if self.multiplicity != 1:
            raise ValueError("RHF export supports closed-shell singlets only")

    @property
    def n_electrons(self) -> int:
        return sum(ATOMIC_NUMBER[el] for el, _ in self.atoms) - self.charge

    def atoms_bohr(self) -> list[tuple[str, np.ndarray]]:
        return [
            (el, np.asarray(xyz, dtype=float) * ANGSTROM_TO_BOHR)
            for el, xyz in self.atoms
        ]


@dataclass
class RhfResult:
    spec: GeometrySpec
    energy: float
    e_nuc: float
    mo_coeff: np.ndarray
    mo_energy: np.ndarray
    h_core: np.ndarray
    eri_ao: np.ndarray
    iterations: int = 0
    converged: bool = False
    extras: dict = field(default_factory=dict)


def run_rhf(
    spec: GeometrySpec,
    max_cycles: int = 200,
    conv_tol: float = 1e-12,
) -> RhfResult:
    """Restricted Hartree-Fock with DIIS acceleration."""
    atoms = spec.atoms_bohr()
    basis = build_basis(atoms)
    charges = [(float(ATOMIC_NUMBER[el]), xyz) for el, xyz in atoms]

    s = overlap_matrix(basis)
    h_core = kinetic_matrix(basis) + nuclear_matrix(basis, charges)
    eri = eri_tensor(basis)

    e_nuc = 0.0
    for i in range(len(charges)):
        for j in range(i):
            zi, ri = charges[i]
            zj, rj = charges[j]
            e_nuc += zi * zj / np.linalg.norm(ri - rj)

    n_occ = spec.n_electrons // 2
    if 2 * n_occ != spec.n_electrons:
        raise ScfError("odd electron count cannot be closed shell")

    s_vals, s_vecs = np.linalg.eigh(s)
    x = s_vecs @ np.diag(s_vals ** -0.5) @ s_vecs.T

    def solve_fock(f):
        fp = x.T @ f @ x
        energies, cp = np.linalg.eigh(fp)
        return energies, x @ cp

    mo_energy, c = solve_fock(h_core)
    density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T

    diis_f: list[np.ndarray] = []
    diis_err: list[np.ndarray] = []
    energy = 0.0
    converged = False
    cycle = 0
    for cycle in range(1, max_cycles + 1):
        j = np.einsum("pqrs,rs->pq", eri, density)
        k = np.einsum("prqs,rs->pq", eri, density)
        fock = h_core + j - 0.5 * k

        err = fock @ density @ s - s @ density @ fock
        diis_f.append(fock.copy())
        diis_err.append(err.copy())
        if len(diis_f) > 8:
            diis_f.pop(0)
            diis_err.pop(0)
        if len(diis_f) > 1:
            m = len(diis_f)
            b = -np.ones((m + 1, m + 1))
            b[m, m] = 0.0
            for a in range(m):
                for bb in range(m):
                    b[a, bb] = np.sum(diis_err[a] * diis_err[bb])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                weights = np.linalg.solve(b, rhs)[:m]
                fock = sum(w * f for w, f in zip(weights, diis_f))
            except np.linalg.LinAlgError:
                pass

        mo_energy, c = solve_fock(fock)
        new_density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
        new_energy = 0.5 * np.sum(new_density * (h_core + fock)) + e_nuc

        delta_e = abs(new_energy - energy)
        delta_d = np.max(np.abs(new_density - density))
        density, energy = new_density, new_energy
        if delta_e < conv_tol and delta_d < 1e-8 and cycle > 2:
            converged = True
            break

    if not converged:
        raise ScfError(f"SCF did not converge in {max_cycles} cycles for {spec.name}")

    return RhfResult(
        spec=spec,
        energy=float(energy),
        e_nuc=float(e_nuc),
        mo_coeff=c,
        mo_energy=mo_energy,
        h_core=h_core,
        eri_ao=eri,
        iterations=cycle,
        converged=converged,
    )


def canonicalize_signs(c: np.ndarray) -> np.ndarray:
    """Flip each orbital so its largest-magnitude coefficient is positive."""
    c = c.copy()
    for col in range(c.shape[1]):
        pivot = np.argmax(np.abs(c[:, col]))
        if c[pivot, col] < 0.0:
            c[:, col] *= -1.0
    return c


def mo_integrals(result: RhfResult) -> MolecularIntegrals:
    """Integrals in the canonical RHF molecular-orbital basis."""
    c = canonicalize_signs(result.mo_coeff)
    h1 = c.T @ result.h_core @ c
    eri_mo = np.einsum("pi,pqrs->iqrs", c, result.eri_ao, optimize=True)
    eri_mo = np.einsum("qj,iqrs->ijrs", c, eri_mo, optimize=True)
    eri_mo = np.einsum("rk,ijrs->ijks", c, eri_mo, optimize=True)
    eri_mo = np.einsum("sl,ijks->ijkl", c, eri_mo, optimize=True)
    # scrub round-off so the exported tensors satisfy exact 8-fold symmetry
    h1 = 0.5 * (h1 + h1.T)
    sym = eri_mo
    sym = 0.5 * (sym + sym.transpose(1, 0, 2, 3))
    sym = 0.5 * (sym + sym.transpose(0, 1, 3, 2))
    sym = 0.5 * (sym + sym.transpose(2, 3, 0, 1))
    return MolecularIntegrals(
        n_orb=c.shape[1],
        n_elec=result.spec.n_electrons,
        ms2=0,
        e_nuc=result.e_nuc,
        h1=h1,
        h2=sym,
    )


def generate_fcidump(spec: GeometrySpec, out_path: str | Path) -> tuple[Path, Path]:
    """Run RHF, export the FCIDUMP, and write the metadata sidecar.

    Returns (fcidump path, sidecar path).  The sidecar records the RHF total
    energy so consumers can cross-check the reference determinant energy.
    """
    result = run_rhf(spec)
    mol = mo_integrals(result)

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(write_fcidump(mol))

    sidecar = out_path.with_suffix(".json")
    sidecar.write_text(
        json.dumps(
            {
                "name": spec.name,
                "atoms": [[el, list(map(float, xyz))] for el, xyz in spec.atoms],
                "basis": spec.basis,
                "charge": spec.charge,
                "multiplicity": spec.multiplicity,
                "n_orb": mol.n_orb,
                "n_elec": mol.n_elec,
                "scf_energy_hartree": result.energy,
                "nuclear_repulsion_hartree": result.e_nuc,
                "scf_iterations": result.iterations,
            },
            indent=2,
        )
        + "\n"
    )
    return out_path, sidecar
