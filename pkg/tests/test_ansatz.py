import numpy as np
import pytest

from helpers import qubit_operator_matrix
from molvqd.ansatz import AdaptConfig, adapt_gradients, adapt_grow, build_k_upccgsd
from molvqd.errors import DomainError
from molvqd.fermion import GeneratorKind
from molvqd.pools import PoolFlavor, build_pool
from molvqd.simulator import (
    Engine,
    ReferenceKind,
    Statevector,
    apply_slots,
    prepare_reference,
)
from molvqd.vqd import OptimizerConfig, minimize

SINGLET = ReferenceKind.CLOSED_SHELL_SINGLET


@pytest.fixture(scope="module")
def pool6():
    return build_pool(PoolFlavor.SUPCCGSD, 6)


@pytest.fixture(scope="module")
def pool_h2():
    return build_pool(PoolFlavor.SUPCCGSD, 2)


def test_k_upccgsd_slot_counts(pool6):
    assert build_k_upccgsd(pool6, 1, seed=0).n_ops == 30
    assert build_k_upccgsd(pool6, 2, seed=0).n_ops == 60


def test_k_upccgsd_deterministic_and_in_range(pool6):
    a = build_k_upccgsd(pool6, 2, seed=123)
    b = build_k_upccgsd(pool6, 2, seed=123)
    assert np.array_equal(a.thetas, b.thetas)
    assert np.all(a.thetas >= 0.0) and np.all(a.thetas < 0.1)
    c = build_k_upccgsd(pool6, 2, seed=124)
    assert not np.array_equal(a.thetas, c.thetas)


def test_k_upccgsd_requires_paired_pool():
    full = build_pool(PoolFlavor.SUCCGSD, 2)
    with pytest.raises(DomainError):
        build_k_upccgsd(full, 1, seed=0)
    with pytest.raises(DomainError):
        build_k_upccgsd(build_pool(PoolFlavor.SUPCCGSD, 2), 0, seed=0)


def test_ansatz_application_order_and_param_count(pool_h2):
    ansatz = build_k_upccgsd(pool_h2, 2, seed=5)
    assert ansatz.n_ops == len(ansatz.thetas) == 4
    with pytest.raises(DomainError):
        ansatz.with_thetas([0.0])
    state = ansatz.state(4, 2)
    ref = prepare_reference(SINGLET, 4, 2)
    manual = apply_slots(ref, ansatz.slots)
    assert np.max(np.abs(state.amps - manual.amps)) < 1e-14


def brute_force_scores(psi, pool, h_dense, deflation, n_qubits):
    """Independent selection-score oracle from dense matrices.

    Differentiates F(t) = <psi(t)|H|psi(t)> + sum beta |<phi|psi(t)>|^2 with
    psi(t) = expm(t A) psi at t = 0 analytically.
    """
    scores = []
    for gen in pool.generators:
        a = qubit_operator_matrix(gen.qubit, n_qubits)
        a_psi = a @ psi
        value = 2.0 * np.real(np.vdot(h_dense @ psi, a_psi))
        for phi, beta in deflation:
            value += 2.0 * beta * np.real(np.vdot(phi, a_psi) * np.vdot(psi, phi))
        scores.append(abs(value))
    return np.array(scores)


def test_adapt_gradients_match_brute_force(h2, h2_hamiltonian, pool_h2):
    mol, _ = h2
    rng = np.random.default_rng(2)
    engine = Engine(mol.n_qubits)
    ref = prepare_reference(SINGLET, mol.n_qubits, mol.n_elec)
    psi = apply_slots(ref, [(pool_h2.generators[0], 0.4), (pool_h2.generators[1], -0.3)], engine)
    phi_amps = rng.normal(size=16) + 1j * rng.normal(size=16)
    phi_amps /= np.linalg.norm(phi_amps)
    phi = Statevector(4, phi_amps)

    scores, norm = adapt_gradients(psi, pool_h2, h2_hamiltonian, [(phi, 3.0)], engine)
    h_dense = qubit_operator_matrix(h2_hamiltonian, 4)
    expected = brute_force_scores(psi.amps, pool_h2, h_dense, [(phi_amps, 3.0)], 4)
    assert np.max(np.abs(scores - expected)) < 1e-10
    assert abs(norm - np.sqrt(np.sum(expected**2))) < 1e-10


def test_scores_equal_appended_parameter_gradient(h2, h2_hamiltonian, pool_h2):
    # the selection score must be the magnitude of dF/dtheta for appending
    # the operator at theta = 0, here cross-checked with the adjoint sweep
    from molvqd.simulator import energy_and_gradient

    mol, _ = h2
    engine = Engine(mol.n_qubits)
    ref = prepare_reference(SINGLET, mol.n_qubits, mol.n_elec)
    base_slots = [(pool_h2.generators[1], 0.35), (pool_h2.generators[0], -0.2)]
    psi = apply_slots(ref, base_slots, engine)
    phi = apply_slots(ref, [(pool_h2.generators[0], 0.9)], engine)
    deflation = [(phi, 3.0)]
    scores, _ = adapt_gradients(psi, pool_h2, h2_hamiltonian, deflation, engine)
    for m, gen in enumerate(pool_h2.generators):
        _, grads = energy_and_gradient(
            ref, base_slots + [(gen, 0.0)], h2_hamiltonian, deflation, engine
        )
        assert abs(scores[m] - abs(grads[-1])) < 1e-12


def test_finite_difference_confirms_selection_scores(h2, h2_hamiltonian, pool_h2):
    from molvqd.simulator import energy_and_gradient

    mol, _ = h2
    engine = Engine(mol.n_qubits)
    ref = prepare_reference(SINGLET, mol.n_qubits, mol.n_elec)
    psi = apply_slots(ref, [(pool_h2.generators[1], 0.35)], engine)
    phi = apply_slots(ref, [(pool_h2.generators[0], 0.9)], engine)
    deflation = [(phi, 3.0)]
    scores, _ = adapt_gradients(psi, pool_h2, h2_hamiltonian, deflation, engine)
    h = 1e-6
    for m, gen in enumerate(pool_h2.generators):
        f = lambda t: energy_and_gradient(
            ref, [(pool_h2.generators[1], 0.35), (gen, t)], h2_hamiltonian, deflation, engine
        )[0]
        fd = (f(h) - f(-h)) / (2.0 * h)
        assert abs(scores[m] - abs(fd)) < 1e-6


def test_empty_deflation_reduces_to_energy_gradients(h2, h2_hamiltonian, pool_h2):
    mol, _ = h2
    ref = prepare_reference(SINGLET, mol.n_qubits, mol.n_elec)
    with_empty, _ = adapt_gradients(ref, pool_h2, h2_hamiltonian, [])
    without, _ = adapt_gradients(ref, pool_h2, h2_hamiltonian, None)
    assert np.array_equal(with_empty, without)


def test_scores_vanish_on_eigenstate(h2, h2_hamiltonian, pool_h2):
    mol, _ = h2
    dense = qubit_operator_matrix(h2_hamiltonian, mol.n_qubits)
    _, vecs = np.linalg.eigh(dense)
    ground = Statevector(mol.n_qubits, vecs[:, 0].astype(complex))
    scores, norm = adapt_gradients(ground, pool_h2, h2_hamiltonian)
    assert np.max(scores) < 1e-8
    assert norm < 1e-7


def test_h2_top_score_is_paired_double(h2, h2_hamiltonian, pool_h2):
    # Brillouin: singles have zero gradient at the RHF reference
    mol, _ = h2
    ref = prepare_reference(SINGLET, mol.n_qubits, mol.n_elec)
    scores, _ = adapt_gradients(ref, pool_h2, h2_hamiltonian)
    top = pool_h2.generators[int(np.argmax(scores))]
    assert top.kind is GeneratorKind.PAIRED


def test_scores_invariant_under_global_phases(h2, h2_hamiltonian, pool_h2):
    mol, _ = h2
    rng = np.random.default_rng(4)
    engine = Engine(mol.n_qubits)
    ref = prepare_reference(SINGLET, mol.n_qubits, mol.n_elec)
    psi = apply_slots(ref, [(pool_h2.generators[1], 0.6)], engine)
    phi = apply_slots(ref, [(pool_h2.generators[0], 0.8)], engine)
    base, base_norm = adapt_gradients(psi, pool_h2, h2_hamiltonian, [(phi, 3.0)], engine)
    psi_rot = Statevector(4, np.exp(1j * rng.uniform(0, 2 * np.pi)) * psi.amps)
    phi_rot = Statevector(4, np.exp(1j * rng.uniform(0, 2 * np.pi)) * phi.amps)
    rotated, rot_norm = adapt_gradients(psi_rot, pool_h2, h2_hamiltonian, [(phi_rot, 3.0)], engine)
    assert np.max(np.abs(base - rotated)) < 1e-10
    assert abs(base_norm - rot_norm) < 1e-10


def test_argmax_stable_under_hamiltonian_scaling(h2, h2_hamiltonian, pool_h2):
    mol, _ = h2
    ref = prepare_reference(SINGLET, mol.n_qubits, mol.n_elec)
    base, _ = adapt_gradients(ref, pool_h2, h2_hamiltonian)
    scaled, _ = adapt_gradients(ref, pool_h2, h2_hamiltonian.scale(2.5))
    assert np.max(np.abs(scaled - 2.5 * base)) < 1e-10
    assert np.argmax(scaled) == np.argmax(base)


def _minimizer(cfg=None):
    cfg = cfg or OptimizerConfig()
    return lambda f, x0: minimize(f, x0, cfg)


def test_adapt_grow_h2_ground_state(h2, h2_hamiltonian, h2_levels, pool_h2):
    mol, _ = h2
    ansatz, report = adapt_grow(
        SINGLET, mol.n_qubits, mol.n_elec, pool_h2, h2_hamiltonian,
        deflation=[], cfg=AdaptConfig(epsilon=0.01), minimize_fn=_minimizer(),
    )
    assert report.converged
    assert ansatz.n_ops <= 3
    assert abs(report.steps[-1].energy - h2_levels["S0"].energy) < 1e-6


def test_adapt_grow_immediate_convergence(h2, h2_hamiltonian, h2_levels, pool_h2):
    mol, meta = h2
    ansatz, report = adapt_grow(
        SINGLET, mol.n_qubits, mol.n_elec, pool_h2, h2_hamiltonian,
        deflation=[], cfg=AdaptConfig(epsilon=10.0), minimize_fn=_minimizer(),
    )
    assert report.converged
    assert ansatz.n_ops == 0
    # energy is the reference energy
    state = ansatz.state(mol.n_qubits, mol.n_elec)
    from molvqd.simulator import expectation

    assert abs(expectation(state, h2_hamiltonian) - meta["scf_energy_hartree"]) < 1e-8


def test_adapt_objective_is_monotone(lih, lih_hamiltonian):
    mol, _ = lih
    pool = build_pool(PoolFlavor.SUPCCGSD, mol.n_orb)
    engine = Engine(mol.n_qubits)
    _, report = adapt_grow(
        SINGLET, mol.n_qubits, mol.n_elec, pool, lih_hamiltonian,
        deflation=[], cfg=AdaptConfig(epsilon=0.01, max_ops=25),
        minimize_fn=_minimizer(), engine=engine,
    )
    assert report.converged
    objectives = [step.objective for step in report.steps]
    for before, after in zip(objectives, objectives[1:]):
        assert after <= before + 1e-9


def test_adapt_max_ops_cap_flags_nonconvergence(h2, h2_hamiltonian, pool_h2):
    mol, _ = h2
    _, report = adapt_grow(
        SINGLET, mol.n_qubits, mol.n_elec, pool_h2, h2_hamiltonian,
        deflation=[], cfg=AdaptConfig(epsilon=1e-12, max_ops=2),
        minimize_fn=_minimizer(),
    )
    assert not report.converged
    assert len(report.steps) == 2


def test_adapt_config_validation():
    with pytest.raises(DomainError):
        AdaptConfig(epsilon=0.0)
    with pytest.raises(DomainError):
        AdaptConfig(max_ops=0)
