"""Statevector emulation of variational quantum eigensolvers for molecules.

The package covers the full pipeline: FCIDUMP integrals -> second-quantized
Hamiltonian -> Jordan-Wigner qubit operators -> exact statevector ansatz
simulation (fixed k-UpCCGSD, UCCGSD and adaptively grown ansaetze) ->
deflation-based excited-state sweeps, validated against a built-in full-CI
oracle.
"""

from .errors import (
    ConsistencyError,
    ContractViolation,
    DomainError,
    FormatError,
    MolvqdError,
    RangeError,
    ResourceError,
)

__all__ = [
    "MolvqdError",
    "FormatError",
    "RangeError",
    "ConsistencyError",
    "DomainError",
    "ResourceError",
    "ContractViolation",
]

__version__ = "0.1.0"
