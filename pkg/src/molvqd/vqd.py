"""Deflated variational objective, bounded quasi-Newton optimizer, and the
spin-manifold eigenstate sweep."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.random import SeedSequence
from scipy.optimize import minimize as scipy_minimize

from .ansatz import (
    AdaptConfig,
    AnsatzState,
    GrowthReport,
    adapt_grow,
    build_fixed_pool_ansatz,
    build_k_upccgsd,
)
from .errors import DomainError
from .fermion import ExcitationGenerator, build_hamiltonian, build_s2
from .integrals import MolecularIntegrals
from .pauli import QubitOperator
from .pools import PoolFlavor, build_pool
from .simulator import (
    Engine,
    ReferenceKind,
    Statevector,
    energy_and_gradient,
    expectation,
    overlap,
    prepare_reference,
)


@dataclass(frozen=True)
class OptimizerConfig:
    """L-BFGS-B settings: projected-gradient threshold, iteration cap,
    quasi-Newton memory, and the symmetric parameter bound."""

    pgtol: float = 1e-5
    max_iter: int = 30
    memory: int = 10
    bound: float = 2.0 * np.pi

    def __post_init__(self):
        if self.pgtol <= 0:
            raise DomainError("pgtol must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be at least 1")
        if self.bound <= 0:
            raise DomainError("parameter bound must be positive")


@dataclass(frozen=True)
class VqdConfig:
    beta: float = 3.0
    n_states: int = 2
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self):
        if self.beta <= 0:
            raise DomainError("beta must be positive")
        if self.n_states < 1:
            raise DomainError("n_states must be at least 1")


@dataclass(frozen=True)
class MethodSpec:
    """Ansatz family: 'uccgsd', 'kupccgsd' (with layer count k), or 'adapt'."""

    kind: str
    k: int = 1

    def __post_init__(self):
        if self.kind not in ("uccgsd", "kupccgsd", "adapt"):
            raise DomainError(f"unknown method {self.kind!r}")
        if self.k < 1:
            raise DomainError("layer count k must be at least 1")


@dataclass
class MinimizeOutcome:
    x: np.ndarray
    fun: float
    iterations: int
    converged: bool
    status: str


def minimize(
    objective: Callable[[np.ndarray], tuple[float, np.ndarray]],
    x0: Sequence[float],
    cfg: OptimizerConfig = OptimizerConfig(),
) -> MinimizeOutcome:
    """Bound-constrained limited-memory quasi-Newton minimization.

    Stops when the projected-gradient max-norm falls below pgtol or at
    max_iter; always returns the best point seen, and maps line-search
    failures to a status flag instead of an exception.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.size == 0:
        return MinimizeOutcome(x0, 0.0, 0, True, "empty parameter vector")

    best = {"fun": np.inf, "x": x0.copy()}

    def tracked(thetas):
        value, grad = objective(thetas)
        if value < best["fun"]:
            best["fun"] = value
            best["x"] = np.array(thetas, dtype=float)
        return value, grad

    result = scipy_minimize(
        tracked,
        x0,
        jac=True,
        method="L-BFGS-B",
        bounds=[(-cfg.bound, cfg.bound)] * x0.size,
        options={
            "maxiter": cfg.max_iter,
            "maxcor": cfg.memory,
            "gtol": cfg.pgtol,
            "ftol": 1e-16,
        },
    )
    if result.fun <= best["fun"]:
        best_x, best_fun = np.asarray(result.x), float(result.fun)
    else:
        best_x, best_fun = best["x"], float(best["fun"])
    return MinimizeOutcome(
        x=best_x,
        fun=best_fun,
        iterations=int(result.nit),
        converged=bool(result.status == 0),
        status=str(result.message),
    )


def deflated_objective(
    thetas: Sequence[float],
    ref: Statevector,
    generators: Sequence[ExcitationGenerator],
    hamiltonian: QubitOperator,
    deflation_states: Sequence[Statevector] = (),
    beta: float = 3.0,
    engine: Engine | None = None,
) -> tuple[float, np.ndarray]:
    """F(theta) = <Psi|H|Psi> + beta sum_i |<Phi_i|Psi>|^2 with its gradient."""
    slots = list(zip(generators, np.asarray(thetas, dtype=float)))
    deflation = [(phi, beta) for phi in deflation_states]
    return energy_and_gradient(ref, slots, hamiltonian, deflation, engine)


@dataclass
class VqdOutcome:
    """One converged (or flagged) eigenstate of a sweep."""

    energy: float
    thetas: np.ndarray
    s2: float
    overlaps: tuple[float, ...]
    n_ops: int
    iterations: int
    converged: bool
    objective: float
    state: Statevector
    ansatz: AnsatzState
    growth: GrowthReport | None = None


def vqd_sweep(
    mol: MolecularIntegrals,
    spin: ReferenceKind,
    method: MethodSpec,
    cfg: VqdConfig,
    adapt_cfg: AdaptConfig | None = None,
    seed: int = 0,
    hamiltonian: QubitOperator | None = None,
    engine: Engine | None = None,
) -> list[VqdOutcome]:
    """Find cfg.n_states eigenstates of one spin manifold, lowest first.

    State j is optimized against the deflation set {Phi_0 .. Phi_{j-1}}
    (all weighted by cfg.beta).  Adaptive runs grow a fresh ansatz per
    state; fixed ansaetze draw their random initial parameters from a
    per-state child of ``seed``.  Non-converged states are flagged and the
    sweep continues.  States within a manifold are strictly sequential
    (deflation dependency); independent geometries or manifolds can run
    concurrently with separate engines.
    """
    n_qubits = mol.n_qubits
    ham = hamiltonian if hamiltonian is not None else build_hamiltonian(mol)
    s2_op = build_s2(mol.n_orb)
    engine = engine or Engine(n_qubits)
    flavor = PoolFlavor.SUCCGSD if method.kind == "uccgsd" else PoolFlavor.SUPCCGSD
    pool = build_pool(flavor, mol.n_orb)
    ref = prepare_reference(spin, n_qubits, mol.n_elec)
    seeds = SeedSequence(seed).spawn(cfg.n_states)

    outcomes: list[VqdOutcome] = []
    for j in range(cfg.n_states):
        deflation = [(o.state, cfg.beta) for o in outcomes]
        growth = None
        if method.kind == "adapt":
            acfg = adapt_cfg or AdaptConfig(beta=cfg.beta)
            ansatz, growth = adapt_grow(
                spin,
                n_qubits,
                mol.n_elec,
                pool,
                ham,
                [(o.state, acfg.beta) for o in outcomes],
                acfg,
                lambda f, x0: minimize(f, x0, cfg.optimizer),
                engine,
            )
            if growth.steps:
                objective_value = growth.steps[-1].objective
            else:
                objective_value, _ = energy_and_gradient(
                    ref, [], ham, [(o.state, acfg.beta) for o in outcomes], engine
                )
            iterations = growth.optimizer_iterations
            converged = growth.converged
        else:
            if method.kind == "uccgsd":
                start = build_fixed_pool_ansatz(pool, seeds[j], spin)
            else:
                start = build_k_upccgsd(pool, method.k, seeds[j], spin)

            def objective(thetas, _gens=start.generators):
                return energy_and_gradient(
                    ref, list(zip(_gens, thetas)), ham, deflation, engine
                )

            outcome = minimize(objective, start.thetas, cfg.optimizer)
            ansatz = start.with_thetas(outcome.x)
            objective_value = outcome.fun
            iterations = outcome.iterations
            converged = outcome.converged

        psi = ansatz.state(n_qubits, mol.n_elec, engine)
        outcomes.append(
            VqdOutcome(
                energy=expectation(psi, ham, engine),
                thetas=ansatz.thetas,
                s2=expectation(psi, s2_op, engine),
                overlaps=tuple(overlap(o.state, psi) for o in outcomes),
                n_ops=ansatz.n_ops,
                iterations=iterations,
                converged=converged,
                objective=float(objective_value),
                state=psi,
                ansatz=ansatz,
                growth=growth,
            )
        )
    return outcomes


def npe(errors: Sequence[float]) -> float:
    """Nonparallelity error: max(errors) - min(errors)."""
    errors = list(errors)
    if not errors:
        raise DomainError("npe needs at least one error value")
    return float(max(errors) - min(errors))
