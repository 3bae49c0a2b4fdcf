"""Command line driver: geometry list file in, FCIDUMP files out."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .generate import GeometrySpec, ScfError, generate_fcidump


def load_geometries(path: Path) -> list[GeometrySpec]:
    """Geometry list: JSON array of {name, atoms, basis?, charge?, multiplicity?}."""
    data = json.loads(path.read_text())
    specs = []
    for entry in data:
        specs.append(
            GeometrySpec(
                atoms=[(el, tuple(xyz)) for el, xyz in entry["atoms"]],
                basis=entry.get("basis", "sto-3g"),
                charge=entry.get("charge", 0),
                multiplicity=entry.get("multiplicity", 1),
                name=entry["name"],
            )
        )
    return specs


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="fcidump-gen",
        description="Generate STO-3G RHF FCIDUMP files from a geometry list.",
    )
    parser.add_argument("geometries", type=Path, help="JSON geometry list file")
    parser.add_argument(
        "-o", "--output-dir", type=Path, default=Path("."), help="output directory"
    )
    args = parser.parse_args(argv)

    try:
        specs = load_geometries(args.geometries)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: cannot read geometry list: {exc}", file=sys.stderr)
        return 2

    status = 0
    for spec in specs:
        target = args.output_dir / f"{spec.name}.fcidump"
        try:
            dump, sidecar = generate_fcidump(spec, target)
        except ScfError as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = 1
            continue
        print(f"wrote {dump} (+ {sidecar.name})")
    return status


if __name__ == "__main__":
    sys.exit(main())
