"""Exact full-CI reference spectra via sector-projected diagonalization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceError
from .fermion import build_hamiltonian, build_s2
from .integrals import MolecularIntegrals
from .pauli import MAX_QUBITS, QubitOperator, to_sparse

DEGENERACY_TOL = 1e-8
S2_LABEL_TOL = 1e-6


@dataclass(frozen=True)
class SpectrumEntry:
    """One energy level: energy, spin label, particle number, multiplet count."""

    energy: float
    s2: float
    n_particles: int
    degeneracy: int

    @property
    def spin(self) -> float:
        """Total spin s recovered from s2 = s(s+1)."""
        return 0.5 * (np.sqrt(1.0 + 4.0 * self.s2) - 1.0)


def _popcount(values: np.ndarray) -> np.ndarray:
    counts = np.zeros_like(values)
    work = values.copy()
    while np.any(work):
        counts += work & 1
        work >>= 1
    return counts


def sector_indices(n_qubits: int, n_particles: int) -> np.ndarray:
    """Basis-state indices with the requested occupation count."""
    states = np.arange(1 << n_qubits, dtype=np.int64)
    return states[_popcount(states) == n_particles]


def eigen_spectrum(
    op: QubitOperator,
    n_qubits: int,
    n_particles: int | None = None,
    s2_op: QubitOperator | None = None,
) -> list[SpectrumEntry]:
    """Eigenvalues of a Hermitian operator, optionally particle-projected.

    Degenerate levels (within 1e-8) are grouped; when an S^2 operator is
    supplied each degenerate subspace is rotated to sharp S^2 eigenvectors
    and split by spin, with the multiplet count reported as degeneracy.
    """
    if n_qubits > MAX_QUBITS:
        raise ResourceError(f"{n_qubits} qubits exceeds the {MAX_QUBITS}-qubit oracle limit")
    op.require_hermitian("spectrum operator")
    matrix = to_sparse(op, n_qubits)
    if n_particles is None:
        idx = np.arange(1 << n_qubits)
        n_label = -1
    else:
        idx = sector_indices(n_qubits, n_particles)
        n_label = n_particles
    if idx.size == 0:
        raise DomainError(f"empty particle sector n={n_particles}")
    dense = matrix[idx, :][:, idx].toarray()
    evals, evecs = np.linalg.eigh(dense)

    s2_dense = None
    if s2_op is not None:
        s2_dense = to_sparse(s2_op, n_qubits)[idx, :][:, idx].toarray()

    entries: list[SpectrumEntry] = []
    start = 0
    while start < evals.size:
        stop = start + 1
        while stop < evals.size and evals[stop] - evals[stop - 1] < DEGENERACY_TOL:
            stop += 1
        energy = float(np.mean(evals[start:stop]))
        block = evecs[:, start:stop]
        if s2_dense is None:
            entries.append(SpectrumEntry(energy, float("nan"), n_label, stop - start))
        else:
            sub = block.conj().T @ s2_dense @ block
            s2_vals = np.sort(np.linalg.eigvalsh(0.5 * (sub + sub.conj().T)))
            # split the degenerate block into spin clusters (gap > 1e-3)
            cluster_start = 0
            while cluster_start < s2_vals.size:
                cluster_stop = cluster_start + 1
                while (
                    cluster_stop < s2_vals.size
                    and s2_vals[cluster_stop] - s2_vals[cluster_stop - 1] < 1e-3
                ):
                    cluster_stop += 1
                s2_val = float(np.mean(s2_vals[cluster_start:cluster_stop]))
                members = cluster_stop - cluster_start
                spin = 0.5 * (np.sqrt(1.0 + 4.0 * max(s2_val, 0.0)) - 1.0)
                multiplicity = int(round(2 * spin + 1))
                if members % multiplicity:
                    multiplets = members  # fall back to the raw count
                else:
                    multiplets = members // multiplicity
                entries.append(SpectrumEntry(energy, s2_val, n_label, multiplets))
                cluster_start = cluster_stop
        start = stop
    return entries


def fci_spectrum(
    mol: MolecularIntegrals,
    n_lowest: int = 10,
    n_elec: int | None = None,
    s2: float | None = None,
) -> list[SpectrumEntry]:
    """Lowest exact eigenlevels of the molecular Hamiltonian.

    Diagonalizes the Jordan-Wigner Hamiltonian inside the requested
    particle-number sector and labels each level with its S^2 expectation.
    An optional ``s2`` filter keeps one spin manifold.
    """
    n_qubits = mol.n_qubits
    hamiltonian = build_hamiltonian(mol)
    s2_op = build_s2(mol.n_orb)
    particles = mol.n_elec if n_elec is None else n_elec
    entries = eigen_spectrum(hamiltonian, n_qubits, particles, s2_op)
    if s2 is not None:
        entries = [e for e in entries if abs(e.s2 - s2) < 1e-3]
    return entries[:n_lowest]


def singlet_triplet_levels(
    entries: list[SpectrumEntry],
) -> dict[str, SpectrumEntry]:
    """Name levels S0, S1, ... (s2 = 0) and T1, T2, ... (s2 = 2) by energy order."""
    labels: dict[str, SpectrumEntry] = {}
    singlets = [e for e in entries if abs(e.s2) < 1e-3]
    triplets = [e for e in entries if abs(e.s2 - 2.0) < 1e-3]
    for i, entry in enumerate(sorted(singlets, key=lambda e: e.energy)):
        labels[f"S{i}"] = entry
    for i, entry in enumerate(sorted(triplets, key=lambda e: e.energy)):
        labels[f"T{i + 1}"] = entry
    return labels
