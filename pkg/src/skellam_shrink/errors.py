"""Exception types raised across the package."""


class ParameterDomainError(ValueError):
    """Distribution or prior parameters fall outside their valid domain."""


class DegenerateParameterError(ParameterDomainError):
    """Parameters are valid but sit on a boundary the operation cannot handle."""


class ExtremeObservationError(ArithmeticError):
    """The posterior evidence underflows for an implausible observation."""


class InfeasibleTargetError(ValueError):
    """A moment target cannot be attained by any scale parameter."""


class InvariantViolationError(ValueError):
    """Coefficient pairs (y, t) violate t >= |y| or the parity constraint."""


class MalformedPyramidError(InvariantViolationError):
    """A coefficient pyramid cannot be inverted exactly."""


class LevelOverflowError(ValueError):
    """More decomposition levels were requested than the signal supports."""


class UsageError(ValueError):
    """Bad user-facing input (unknown names, degenerate signals)."""


class PGMFormatError(ValueError):
    """Malformed or unsupported PGM file."""
