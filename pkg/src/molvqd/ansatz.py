"""Ansatz construction: fixed-depth layered states and adaptive growth."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .fermion import ExcitationGenerator
from .pauli import QubitOperator
from .pools import OperatorPool, PoolFlavor
from .simulator import (
    Engine,
    ReferenceKind,
    Statevector,
    apply_slots,
    energy_and_gradient,
    expectation,
    prepare_reference,
)


@dataclass
class AnsatzState:
    """Reference plus ordered (generator, parameter) slots.

    The first slot acts first: |Psi> = exp(t_N G_N) ... exp(t_1 G_1) |ref>.
    """

    reference: ReferenceKind
    slots: list[tuple[ExcitationGenerator, float]]
    provenance: str  # "fixed-k" or "adaptive"

    @property
    def thetas(self) -> np.ndarray:
        return np.array([theta for _, theta in self.slots])

    @property
    def generators(self) -> list[ExcitationGenerator]:
        return [gen for gen, _ in self.slots]

    @property
    def n_ops(self) -> int:
        return len(self.slots)

    @property
    def n_pauli_strings(self) -> int:
        return sum(gen.n_pauli_strings for gen, _ in self.slots)

    def with_thetas(self, thetas: Sequence[float]) -> "AnsatzState":
        if len(thetas) != len(self.slots):
            raise DomainError("parameter count must equal slot count")
        slots = [(gen, float(t)) for (gen, _), t in zip(self.slots, thetas)]
        return AnsatzState(self.reference, slots, self.provenance)

    def state(self, n_qubits: int, n_elec: int, engine: Engine | None = None) -> Statevector:
        ref = prepare_reference(self.reference, n_qubits, n_elec)
        return apply_slots(ref, self.slots, engine)


@dataclass(frozen=True)
class AdaptConfig:
    """Growth control: gradient-norm threshold, safety cap, deflation weight."""

    epsilon: float = 0.01
    max_ops: int = 60
    beta: float = 3.0

    def __post_init__(self):
        if self.epsilon <= 0:
            raise DomainError("epsilon must be positive")
        if self.max_ops < 1:
            raise DomainError("max_ops must be at least 1")


def build_k_upccgsd(
    pool: OperatorPool,
    k: int,
    seed: int,
    reference: ReferenceKind = ReferenceKind.CLOSED_SHELL_SINGLET,
) -> AnsatzState:
    """k concatenated copies of the paired pool, parameters ~ U[0, 0.1)."""
    if pool.flavor is not PoolFlavor.SUPCCGSD:
        raise DomainError("k-UpCCGSD ansatz requires the sUpCCGSD pool")
    if k < 1:
        raise DomainError("layer count k must be at least 1")
    rng = np.random.default_rng(seed)
    slots = []
    for _ in range(k):
        for gen in pool.generators:
            slots.append((gen, float(rng.uniform(0.0, 0.1))))
    return AnsatzState(reference, slots, "fixed-k")


def build_fixed_pool_ansatz(
    pool: OperatorPool,
    seed: int,
    reference: ReferenceKind = ReferenceKind.CLOSED_SHELL_SINGLET,
) -> AnsatzState:
    """Single copy of a full pool (the fixed UCCGSD ansatz), random init."""
    rng = np.random.default_rng(seed)
    slots = [(gen, float(rng.uniform(0.0, 0.1))) for gen in pool.generators]
    return AnsatzState(reference, slots, "fixed-k")


def adapt_gradients(
    psi: Statevector,
    pool: OperatorPool,
    hamiltonian: QubitOperator,
    deflation: list[tuple[Statevector, float]] | None = None,
    engine: Engine | None = None,
) -> tuple[np.ndarray, float]:
    """Selection scores for every pool generator and their overall norm.

    score_m is the exact derivative magnitude of the deflated objective
    when A_m is appended with parameter zero:

        score_m = |2 Re <Psi|H A_m|Psi>
                   + sum_i 2 beta_i Re(<Phi_i|A_m|Psi><Psi|Phi_i>)|

    The energy part alone reproduces plain adaptive-VQE selection; the
    overlap part carries a relative sign that matters, so the parts are
    summed before taking the magnitude (taking magnitudes separately can
    select operators whose true gradient is zero and stall the growth).
    """
    engine = engine or Engine(psi.n_qubits)
    deflation = deflation or []
    h_psi = engine.sparse(hamiltonian) @ psi.amps
    scores = np.zeros(pool.n_ops)
    for m, gen in enumerate(pool.generators):
        a_psi = engine.action(gen).matvec(psi.amps)
        total = 2.0 * np.vdot(h_psi, a_psi).real
        for phi, beta in deflation:
            total += 2.0 * beta * (
                np.vdot(phi.amps, a_psi) * np.vdot(psi.amps, phi.amps)
            ).real
        scores[m] = abs(total)
    return scores, float(np.sqrt(np.sum(scores**2)))


@dataclass
class GrowthStep:
    iteration: int
    op_index: int
    op_label: str
    grad_norm: float
    objective: float
    energy: float


@dataclass
class GrowthReport:
    converged: bool
    final_norm: float
    steps: list[GrowthStep] = field(default_factory=list)
    optimizer_iterations: int = 0


def adapt_grow(
    reference: ReferenceKind,
    n_qubits: int,
    n_elec: int,
    pool: OperatorPool,
    hamiltonian: QubitOperator,
    deflation: list[tuple[Statevector, float]],
    cfg: AdaptConfig,
    minimize_fn: Callable,
    engine: Engine | None = None,
) -> tuple[AnsatzState, GrowthReport]:
    """Grow an ansatz until the selection-score norm drops below epsilon.

    Each iteration appends the highest-scoring generator (ties break to the
    lowest pool index) with its parameter at zero, then re-optimizes all
    parameters against the deflated objective; existing parameters warm
    start.  Stops converged, or flagged non-converged at the max_ops cap.
    """
    engine = engine or Engine(n_qubits)
    ref = prepare_reference(reference, n_qubits, n_elec)
    ansatz = AnsatzState(reference, [], "adaptive")
    psi = ref
    report = GrowthReport(converged=False, final_norm=float("nan"))

    for iteration in range(1, cfg.max_ops + 1):
        scores, norm = adapt_gradients(psi, pool, hamiltonian, deflation, engine)
        report.final_norm = norm
        if norm < cfg.epsilon:
            report.converged = True
            break
        chosen = int(np.argmax(scores))
        generators = ansatz.generators + [pool.generators[chosen]]

        def objective(thetas, _gens=generators):
            return energy_and_gradient(
                ref, list(zip(_gens, thetas)), hamiltonian, deflation, engine
            )

        x0 = np.append(ansatz.thetas, 0.0)
        outcome = minimize_fn(objective, x0)
        report.optimizer_iterations += outcome.iterations
        ansatz = AnsatzState(
            reference, list(zip(generators, outcome.x)), "adaptive"
        )
        psi = apply_slots(ref, ansatz.slots, engine)
        report.steps.append(
            GrowthStep(
                iteration=iteration,
                op_index=chosen,
                op_label=pool.generators[chosen].label(),
                grad_norm=norm,
                objective=float(outcome.fun),
                energy=expectation(psi, hamiltonian, engine),
            )
        )
    return ansatz, report
