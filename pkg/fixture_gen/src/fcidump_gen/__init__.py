"""Self-contained STO-3G RHF engine that exports FCIDUMP fixtures."""

from .generate import GeometrySpec, generate_fcidump, run_rhf

__all__ = ["GeometrySpec", "generate_fcidump", "run_rhf"]
