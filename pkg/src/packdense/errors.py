"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BracketError(RuntimeError):
    """A root bracket has no sign change, or more than one."""


class ConsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""


class CertificateError(ConsistencyError):
    """A computed constant fails its polynomial sign-change certificate."""


class PackingFormatError(ValueError):
    """Malformed packing JSON."""
