"""Exception hierarchy shared across the package."""


class MolvqdError(Exception):
    """Base class for all package-specific errors."""


class FormatError(MolvqdError):
    """Malformed input text (FCIDUMP header/body, run configuration)."""


class RangeError(MolvqdError):
    """An index lies outside the declared register or orbital range."""


class ConsistencyError(MolvqdError):
    """Conflicting duplicate data (e.g. FCIDUMP entries that disagree)."""


class DomainError(MolvqdError):
    """Arguments violate an operation's domain (dimension mismatch, empty input)."""


class ResourceError(MolvqdError):
    """Request exceeds the supported problem size."""


class ContractViolation(MolvqdError):
    """An operator fails a structural precondition (hermiticity etc.)."""
