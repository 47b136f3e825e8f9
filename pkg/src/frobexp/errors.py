"""Exception hierarchy shared by every module."""


class FrobexpError(Exception):
    """Base class for all library errors."""


class UsageError(FrobexpError, ValueError):
    """Malformed call: mismatched parents, bad indices, unknown names."""


class DomainError(FrobexpError, ArithmeticError):
    """Input lies outside the mathematical domain of the operation."""


class CapacityError(UsageError):
    """Request exceeds a configured size cap."""


class ConsistencyError(FrobexpError, RuntimeError):
    """A result violates a guaranteed property.

    Raised when an algorithm that is proven to succeed under its hypotheses
    produces output failing its own post-conditions. Seeing one means a
    hypothesis was violated (for example a wrong exponential candidate).
    """
