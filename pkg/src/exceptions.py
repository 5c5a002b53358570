"""Custom exception hierarchy for hom-twist."""

from typing import Any, Optional


class HomAlgebraException(Exception):
    """Base exception class for hom-twist."""

    def __init__(self, message: str, error_code: str = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.__class__.__name__


class ConfigurationError(HomAlgebraException):
    """Raised when there are configuration-related errors."""
    pass


class DimensionMismatchError(HomAlgebraException):
    """Raised when operands live in spaces of different dimension."""

    def __init__(self, message: str, expected: int = None, actual: int = None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class NoSolutionError(HomAlgebraException):
    """Raised when a linear system is inconsistent."""
    pass


class NonUniqueSolutionError(HomAlgebraException):
    """Raised when a linear system has a positive-dimensional solution set."""

    def __init__(self, message: str, kernel_dimension: int = None):
        super().__init__(message)
        self.kernel_dimension = kernel_dimension


class LeftRightMismatchError(HomAlgebraException):
    """Raised when left and right inverses of a tensor disagree."""
    pass


class MissingStructureError(HomAlgebraException):
    """Raised when a formula needs α^{-1}, S or another absent structure map."""
    pass


class PreconditionError(HomAlgebraException):
    """Raised when an operation's precondition does not hold."""

    def __init__(self, message: str, offending: Any = None):
        super().__init__(message)
        self.offending = offending


class FlavorMismatchError(PreconditionError):
    """Raised when a structure of the wrong flavor is supplied."""
    pass


class AlphaWindowExceededError(PreconditionError):
    """Raised when an α-power outside the configured window is requested."""

    def __init__(self, power: int, window: int):
        super().__init__(
            f"alpha power {power} outside configured window -{window}..{window}",
            offending=power,
        )
        self.power = power
        self.window = window


class TheoremCheckFailed(HomAlgebraException):
    """Raised when a construction that must satisfy a theorem does not."""

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report


class ParseError(HomAlgebraException):
    """Raised when an algebra file cannot be parsed."""

    def __init__(self, message: str, path: str = None, location: str = None):
        super().__init__(message)
        self.path = path
        self.location = location


class UnknownInstanceError(HomAlgebraException):
    """Raised when a named library instance, twist or R-matrix does not exist."""
    pass
