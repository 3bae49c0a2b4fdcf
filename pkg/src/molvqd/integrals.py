"""FCIDUMP parsing into validated molecular-integral tensors.

The two-electron tensor is stored in chemists' notation (pq|rs) with the
full 8-fold real-orbital symmetry expanded; reordering to the second
quantized operator form happens in :mod:`molvqd.fermion`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConsistencyError, FormatError, RangeError

DUPLICATE_TOL = 1e-10
WRITE_CUTOFF = 1e-12

_END_MARKER = re.compile(r"&END|/", re.IGNORECASE)


@dataclass(frozen=True)
class MolecularIntegrals:
    """Nuclear constant plus one- and two-electron integrals (Hartree)."""

    n_orb: int
    n_elec: int
    ms2: int
    e_nuc: float
    h1: np.ndarray
    h2: np.ndarray

    def __post_init__(self):
        n = self.n_orb
        h1 = np.array(self.h1, dtype=float)
        h2 = np.array(self.h2, dtype=float)
        if h1.shape != (n, n) or h2.shape != (n, n, n, n):
            raise FormatError("integral tensor shapes do not match n_orb")
        if not (0 <= self.n_elec <= 2 * n):
            raise FormatError(f"n_elec={self.n_elec} outside [0, {2 * n}]")
        if np.max(np.abs(h1 - h1.T)) > DUPLICATE_TOL:
            raise ConsistencyError("one-electron tensor is not symmetric")
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if np.max(np.abs(h2 - h2.transpose(perm))) > DUPLICATE_TOL:
                raise ConsistencyError("two-electron tensor lacks 8-fold symmetry")
        h1.flags.writeable = False
        h2.flags.writeable = False
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_orb


def _eri_images(p: int, q: int, r: int, s: int):
    return (
        (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
        (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
    )


def _parse_header(text: str) -> tuple[dict[str, int], str]:
    match = _END_MARKER.search(text)
    if match is None:
        raise FormatError("FCIDUMP header has no &END (or /) terminator")
    header, body = text[: match.start()], text[match.end():]
    header = header.strip()
    if not header.startswith("&"):
        raise FormatError("FCIDUMP must begin with a namelist header")
    # Tolerant namelist scan: case-insensitive keys, comma or whitespace
    # separators, list values (ORBSYM=1,1,...) and unknown keys allowed.
    values: dict[str, list[str]] = {}
    for m in re.finditer(
        r"([A-Za-z][A-Za-z0-9_]*)\s*=\s*([^=]*?)(?=[,\s][A-Za-z][A-Za-z0-9_]*\s*=|$)",
        header[1:],
        re.DOTALL,
    ):
        vals = [t for t in re.split(r"[,\s]+", m.group(2)) if t]
        values[m.group(1).upper()] = vals
    out = {}
    for name in ("NORB", "NELEC", "MS2"):
        if name not in values or not values[name]:
            raise FormatError(f"FCIDUMP header is missing {name}")
        try:
            out[name] = int(values[name][0])
        except ValueError as exc:
            raise FormatError(f"{name} is not an integer: {values[name][0]!r}") from exc
    if out["NORB"] < 1:
        raise FormatError(f"NORB={out['NORB']} must be positive")
    return out, body


def parse_fcidump(text: str) -> MolecularIntegrals:
    """Parse FCIDUMP text into validated integrals.

    Body lines are ``value i j k l`` with 1-based indices: four nonzero
    indices set the chemists' integral (ij|kl) and its 7 symmetry images,
    ``k = l = 0`` sets h1[i, j], all-zero indices set the nuclear constant.
    Duplicate entries must agree within 1e-10 (last write wins).
    """
    header, body = _parse_header(text)
    n = header["NORB"]
    h1 = np.zeros((n, n))
    h2 = np.zeros((n, n, n, n))
    e_nuc = 0.0
    seen: dict[tuple, float] = {}

    for lineno, raw in enumerate(body.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 5:
            raise FormatError(f"body line {lineno}: expected 'value i j k l', got {raw!r}")
        try:
            value = float(fields[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(f) for f in fields[1:])
        except ValueError as exc:
            raise FormatError(f"body line {lineno}: {raw!r}") from exc
        for idx in (i, j, k, l):
            if idx < 0 or idx > n:
                raise RangeError(f"body line {lineno}: index {idx} outside [0, {n}]")

        if i == j == k == l == 0:
            slot = ("nuc",)
            if slot in seen and abs(seen[slot] - value) > DUPLICATE_TOL:
                raise ConsistencyError(f"conflicting nuclear constants: {seen[slot]} vs {value}")
            seen[slot] = value
            e_nuc = value
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FormatError(f"body line {lineno}: bad one-electron indices {raw!r}")
            a, b = i - 1, j - 1
            slot = ("h1", max(a, b), min(a, b))
            if slot in seen and abs(seen[slot] - value) > DUPLICATE_TOL:
                raise ConsistencyError(f"conflicting h1[{a},{b}]: {seen[slot]} vs {value}")
            seen[slot] = value
            h1[a, b] = value
            h1[b, a] = value
        elif 0 in (i, j, k, l):
            raise FormatError(f"body line {lineno}: unsupported zero-index pattern {raw!r}")
        else:
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            slot = ("h2", min(_eri_images(p, q, r, s)))
            if slot in seen and abs(seen[slot] - value) > DUPLICATE_TOL:
                raise ConsistencyError(
                    f"conflicting (|{p}{q}{r}{s}|): {seen[slot]} vs {value}"
                )
            seen[slot] = value
            for image in _eri_images(p, q, r, s):
                h2[image] = value

    return MolecularIntegrals(
        n_orb=n, n_elec=header["NELEC"], ms2=header["MS2"], e_nuc=e_nuc, h1=h1, h2=h2
    )


def parse_fcidump_file(path: str | Path) -> MolecularIntegrals:
    return parse_fcidump(Path(path).read_text())


def write_fcidump(mol: MolecularIntegrals) -> str:
    """Serialize integrals back to FCIDUMP text (symmetry-unique entries)."""
    lines = [
        f" &FCI NORB={mol.n_orb},NELEC={mol.n_elec},MS2={mol.ms2},",
        "  ORBSYM=" + "1," * mol.n_orb,
        "  ISYM=1,",
        " &END",
    ]

    def emit(value: float, i: int, j: int, k: int, l: int) -> None:
        lines.append(f"{value: 23.16E} {i:3d} {j:3d} {k:3d} {l:3d}")

    n = mol.n_orb
    for p in range(n):
        for q in range(p + 1):
            pq = p * (p + 1) // 2 + q
            for r in range(p + 1):
                for s in range(r + 1):
                    rs = r * (r + 1) // 2 + s
                    if rs > pq:
                        continue
                    value = mol.h2[p, q, r, s]
                    if abs(value) > WRITE_CUTOFF:
                        emit(value, p + 1, q + 1, r + 1, s + 1)
    for p in range(n):
        for q in range(p + 1):
            value = mol.h1[p, q]
            if abs(value) > WRITE_CUTOFF:
                emit(value, p + 1, q + 1, 0, 0)
    emit(mol.e_nuc, 0, 0, 0, 0)
    return "\n".join(lines) + "\n"


def fixture_path(name: str) -> Path:
    """Path of a bundled FCIDUMP fixture, e.g. ``lih_1.80`` or ``h2_0.7414``."""
    base = resources.files("molvqd").joinpath("data")
    path = Path(str(base.joinpath(f"{name}.fcidump")))
    if not path.exists():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path


def load_fixture(name: str) -> tuple[MolecularIntegrals, dict]:
    """Bundled fixture plus its metadata sidecar (SCF energy, geometry)."""
    path = fixture_path(name)
    meta_path = path.with_suffix(".json")
    metadata = json.loads(meta_path.read_text()) if meta_path.exists() else {}
    return parse_fcidump_file(path), metadata


def list_fixtures() -> list[str]:
    base = Path(str(resources.files("molvqd").joinpath("data")))
    return sorted(p.stem for p in base.glob("*.fcidump"))
