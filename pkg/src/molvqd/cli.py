"""Batch driver: run bond-length scans from a config file and emit CSV artifacts.

Artifacts written to the output directory:

* ``energies.csv``   one row per geometry/manifold/state
* ``npe.csv``        nonparallelity error per state label
* ``resources.csv``  operator/gadget counts with a naive uncompiled CX estimate
* ``growth_trace.csv`` adaptive growth log (adaptive runs only)
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ansatz import AdaptConfig
from .errors import FormatError, MolvqdError
from .fermion import build_hamiltonian
from .integrals import fixture_path, parse_fcidump_file
from .oracle import fci_spectrum, singlet_triplet_levels
from .pools import PoolFlavor, build_pool
from .simulator import Engine, ReferenceKind
from .vqd import MethodSpec, OptimizerConfig, VqdConfig, npe, vqd_sweep

log = logging.getLogger("molvqd")

_MANIFOLDS = {
    "singlet": ReferenceKind.CLOSED_SHELL_SINGLET,
    "triplet": ReferenceKind.OPEN_SHELL_TRIPLET,
}


@dataclass(frozen=True)
class RunConfig:
    """Validated scan manifest."""

    fixtures: tuple[tuple[float, Path], ...]  # (geometry in Angstrom, file)
    method: MethodSpec
    manifolds: tuple[str, ...]
    n_states: int
    beta: float
    epsilon: float
    max_ops: int
    optimizer: OptimizerConfig
    seed: int
    output_dir: Path

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "RunConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise FormatError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(raw, base_dir=path.parent, **overrides)

    @classmethod
    def from_dict(
        cls,
        raw: dict,
        base_dir: Path | None = None,
        output_dir: Path | None = None,
        seed: int | None = None,
    ) -> "RunConfig":
        base_dir = base_dir or Path.cwd()
        fixtures = []
        for entry in raw.get("fixtures", []):
            geometry = float(entry["geometry"])
            if "fixture" in entry:
                file_path = fixture_path(entry["fixture"])
            else:
                file_path = Path(entry["path"])
                if not file_path.is_absolute():
                    file_path = base_dir / file_path
            fixtures.append((geometry, file_path))
        if not fixtures:
            raise FormatError("config lists no fixtures")
        geometries = [g for g, _ in fixtures]
        if any(b <= a for a, b in zip(geometries, geometries[1:])):
            raise FormatError("geometries must be strictly increasing")

        method = MethodSpec(raw.get("method", "adapt"), k=int(raw.get("k", 1)))
        manifolds = tuple(raw.get("manifolds", ["singlet"]))
        for manifold in manifolds:
            if manifold not in _MANIFOLDS:
                raise FormatError(f"unknown spin manifold {manifold!r}")
        opt_raw = raw.get("optimizer", {})
        optimizer = OptimizerConfig(
            pgtol=float(opt_raw.get("pgtol", 1e-5)),
            max_iter=int(opt_raw.get("max_iter", 30)),
            memory=int(opt_raw.get("memory", 10)),
            bound=float(opt_raw.get("bound", 2.0 * np.pi)),
        )
        return cls(
            fixtures=tuple(fixtures),
            method=method,
            manifolds=manifolds,
            n_states=int(raw.get("n_states", 2)),
            beta=float(raw.get("beta", 3.0)),
            epsilon=float(raw.get("epsilon", 0.01)),
            max_ops=int(raw.get("max_ops", 60)),
            optimizer=optimizer,
            seed=int(seed if seed is not None else raw.get("seed", 0)),
            output_dir=Path(output_dir or raw.get("output_dir", "molvqd_out")),
        )


def _method_tag(method: MethodSpec) -> str:
    if method.kind == "kupccgsd":
        return f"{method.k}-UpCCGSD"
    return {"uccgsd": "UCCGSD", "adapt": "ADAPT"}[method.kind]


def _run_geometry(task: tuple) -> dict:
    """Worker: one geometry, all manifolds. Returns plain CSV-ready rows."""
    (index, geometry, file_path, method, manifolds, n_states, beta,
     epsilon, max_ops, optimizer, seed) = task
    out: dict = {"geometry": geometry, "index": index, "rows": [], "trace": [],
                 "resources": [], "failed": False, "error": ""}
    try:
        mol = parse_fcidump_file(file_path)
        hamiltonian = build_hamiltonian(mol)
        engine = Engine(mol.n_qubits)
        levels = singlet_triplet_levels(
            fci_spectrum(mol, n_lowest=12, n_elec=mol.n_elec)
        )
        cfg = VqdConfig(beta=beta, n_states=n_states, optimizer=optimizer)
        adapt_cfg = AdaptConfig(epsilon=epsilon, max_ops=max_ops, beta=beta)
        tag = _method_tag(method)
        for manifold in manifolds:
            sector = "S" if manifold == "singlet" else "T"
            outcomes = vqd_sweep(
                mol,
                _MANIFOLDS[manifold],
                method,
                cfg,
                adapt_cfg,
                seed=seed + index,
                hamiltonian=hamiltonian,
                engine=engine,
            )
            sector_levels = {
                name: entry for name, entry in levels.items() if name.startswith(sector)
            }
            for outcome in outcomes:
                label, entry = min(
                    sector_levels.items(), key=lambda kv: abs(kv[1].energy - outcome.energy)
                )
                out["rows"].append(
                    {
                        "geometry_angstrom": f"{geometry:.4f}",
                        "state": label,
                        "method": tag,
                        "energy_hartree": f"{outcome.energy:.10f}",
                        "fci_hartree": f"{entry.energy:.10f}",
                        "error_millihartree": f"{(outcome.energy - entry.energy) * 1000.0:.6f}",
                        "s2": f"{outcome.s2:.8f}",
                        "n_ops": str(outcome.n_ops),
                        "optimizer_iterations": str(outcome.iterations),
                        "converged": str(outcome.converged).lower(),
                    }
                )
                out["resources"].append(
                    {
                        "label": f"{label} {tag}",
                        "n_ops": outcome.n_ops,
                        "n_gadgets": outcome.ansatz.n_pauli_strings,
                        "n_cx": sum(
                            2 * (s.weight - 1)
                            for gen, _ in outcome.ansatz.slots
                            for s in gen.qubit.terms
                        ),
                    }
                )
                if outcome.growth is not None:
                    for step in outcome.growth.steps:
                        out["trace"].append(
                            {
                                "geometry_angstrom": f"{geometry:.4f}",
                                "manifold": manifold,
                                "state": label,
                                "iteration": str(step.iteration),
                                "op_index": str(step.op_index),
                                "op_label": step.op_label,
                                "grad_norm": f"{step.grad_norm:.8f}",
                                "objective_hartree": f"{step.objective:.10f}",
                                "energy_hartree": f"{step.energy:.10f}",
                            }
                        )
    except (MolvqdError, OSError, ValueError) as exc:
        out["failed"] = True
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def report_resources(entries: list[tuple[str, int, int, int]]) -> list[dict]:
    """Rows of (label, operators, gadgets, CX estimate), tagged uncompiled."""
    return [
        {
            "ansatz": label,
            "operators": f"{n_ops:g}",
            "pauli_gadgets": f"{n_gadgets:g}",
            "cx_estimate_uncompiled": f"{n_cx:g}",
        }
        for label, n_ops, n_gadgets, n_cx in entries
    ]


def _static_resources(cfg: RunConfig, n_orb: int) -> list[tuple[str, int, int, int]]:
    entries = []
    if cfg.method.kind == "uccgsd":
        pool = build_pool(PoolFlavor.SUCCGSD, n_orb)
        entries.append(("UCCGSD (fixed)", pool.n_ops, pool.n_pauli_strings, pool.naive_cx_count()))
    elif cfg.method.kind == "kupccgsd":
        pool = build_pool(PoolFlavor.SUPCCGSD, n_orb)
        k = cfg.method.k
        entries.append(
            (
                f"{k}-UpCCGSD (fixed)",
                k * pool.n_ops,
                k * pool.n_pauli_strings,
                k * pool.naive_cx_count(),
            )
        )
    return entries


def _write_csv(path: Path, fieldnames: list[str], rows: list[dict]) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


@dataclass
class ScanResult:
    exit_status: int
    output_dir: Path
    failures: list[str] = field(default_factory=list)


def run_scan(cfg: RunConfig, workers: int = 1) -> ScanResult:
    """Execute the configured scan and write all CSV artifacts."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    tasks = []
    failures: list[str] = []
    n_orb = None
    for index, (geometry, file_path) in enumerate(cfg.fixtures):
        if not file_path.exists():
            failures.append(f"geometry {geometry:.4f}: missing fixture {file_path}")
            continue
        if n_orb is None:
            n_orb = parse_fcidump_file(file_path).n_orb
        tasks.append(
            (
                index, geometry, file_path, cfg.method, cfg.manifolds,
                cfg.n_states, cfg.beta, cfg.epsilon, cfg.max_ops,
                cfg.optimizer, cfg.seed,
            )
        )

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_geometry, tasks))
    else:
        results = [_run_geometry(task) for task in tasks]
    results.sort(key=lambda r: r["index"])

    energy_rows: list[dict] = []
    trace_rows: list[dict] = []
    dynamic_resources: dict[str, list[tuple[int, int, int]]] = {}
    for result in results:
        if result["failed"]:
            failures.append(f"geometry {result['geometry']:.4f}: {result['error']}")
            continue
        energy_rows.extend(result["rows"])
        trace_rows.extend(result["trace"])
        for res in result["resources"]:
            dynamic_resources.setdefault(res["label"], []).append(
                (res["n_ops"], res["n_gadgets"], res["n_cx"])
            )

    _write_csv(
        cfg.output_dir / "energies.csv",
        [
            "geometry_angstrom", "state", "method", "energy_hartree", "fci_hartree",
            "error_millihartree", "s2", "n_ops", "optimizer_iterations", "converged",
        ],
        energy_rows,
    )

    npe_rows = []
    by_state: dict[tuple[str, str], list[float]] = {}
    for row in energy_rows:
        key = (row["state"], row["method"])
        by_state.setdefault(key, []).append(float(row["error_millihartree"]))
    for (state, method_tag), errors in sorted(by_state.items()):
        npe_rows.append(
            {
                "state": state,
                "method": method_tag,
                "npe_millihartree": f"{npe(errors):.6f}",
                "n_geometries": str(len(errors)),
            }
        )
    _write_csv(
        cfg.output_dir / "npe.csv",
        ["state", "method", "npe_millihartree", "n_geometries"],
        npe_rows,
    )

    resource_entries: list[tuple[str, float, float, float]] = []
    if n_orb is not None:
        resource_entries.extend(_static_resources(cfg, n_orb))
    for label in sorted(dynamic_resources):
        samples = dynamic_resources[label]
        resource_entries.append(
            (
                f"{label} (average)",
                round(float(np.mean([s[0] for s in samples])), 4),
                round(float(np.mean([s[1] for s in samples])), 4),
                round(float(np.mean([s[2] for s in samples])), 4),
            )
        )
    _write_csv(
        cfg.output_dir / "resources.csv",
        ["ansatz", "operators", "pauli_gadgets", "cx_estimate_uncompiled"],
        report_resources(resource_entries),
    )

    if cfg.method.kind == "adapt":
        _write_csv(
            cfg.output_dir / "growth_trace.csv",
            [
                "geometry_angstrom", "manifold", "state", "iteration", "op_index",
                "op_label", "grad_norm", "objective_hartree", "energy_hartree",
            ],
            trace_rows,
        )

    for failure in failures:
        log.error("%s", failure)
    return ScanResult(exit_status=1 if failures else 0, output_dir=cfg.output_dir, failures=failures)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="molvqd",
        description="Run a VQD bond-length scan from a JSON config file.",
    )
    parser.add_argument("config", type=Path, help="path to the run configuration")
    parser.add_argument("-o", "--output-dir", type=Path, default=None, help="override output directory")
    parser.add_argument("-w", "--workers", type=int, default=1, help="parallel geometry workers")
    parser.add_argument("-s", "--seed", type=int, default=None, help="override the RNG seed")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        cfg = RunConfig.from_file(args.config, output_dir=args.output_dir, seed=args.seed)
    except MolvqdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    result = run_scan(cfg, workers=args.workers)
    for failure in result.failures:
        print(f"error: {failure}", file=sys.stderr)
    print(f"artifacts written to {result.output_dir}")
    return result.exit_status


if __name__ == "__main__":
    sys.exit(main())
