"""Exception types shared across the package."""


class CliffcertError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(CliffcertError, ValueError):
    """Operands act on different qubit counts."""


class CapacityError(CliffcertError, ValueError):
    """Dense rendering requested above the supported qubit guard."""


class ParseError(CliffcertError, ValueError):
    """A Pauli label or serialized document could not be parsed."""


class DomainError(CliffcertError, ValueError):
    """An argument lies outside the operation's domain."""


class ValidationError(CliffcertError, ValueError):
    """A matrix failed density-matrix validation."""


class BallViolationError(ValidationError):
    """Expectation coefficients lie outside the closed unit ball."""


class OrientationError(DomainError):
    """An extended-set transformation must have determinant +1."""
