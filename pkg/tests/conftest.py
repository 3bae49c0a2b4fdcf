import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from molvqd.fermion import build_hamiltonian
from molvqd.integrals import load_fixture
from molvqd.oracle import fci_spectrum, singlet_triplet_levels
from molvqd.simulator import Engine


@pytest.fixture(scope="session")
def h2():
    mol, meta = load_fixture("h2_0.7414")
    return mol, meta


@pytest.fixture(scope="session")
def h2_hamiltonian(h2):
    mol, _ = h2
    return build_hamiltonian(mol)


@pytest.fixture(scope="session")
def h2_levels(h2):
    mol, _ = h2
    return singlet_triplet_levels(fci_spectrum(mol, n_lowest=8))


@pytest.fixture(scope="session")
def lih():
    mol, meta = load_fixture("lih_1.80")
    return mol, meta


@pytest.fixture(scope="session")
def lih_hamiltonian(lih):
    mol, _ = lih
    return build_hamiltonian(mol)


@pytest.fixture(scope="session")
def lih_levels(lih):
    mol, _ = lih
    return singlet_triplet_levels(fci_spectrum(mol, n_lowest=12))


@pytest.fixture()
def h2_engine(h2):
    mol, _ = h2
    return Engine(mol.n_qubits)
