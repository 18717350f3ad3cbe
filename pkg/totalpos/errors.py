"""
Error hierarchy for totalpos.

Every error raised on purpose by the library derives from TotalPosError so
callers (the CLI in particular) can map failures to exit codes.
"""

from typing import Optional


class TotalPosError(Exception):
    """Base class for all library errors."""
    pass


class InputError(TotalPosError, ValueError):
    """Malformed input: wrong shape, index out of range, unparsable file."""
    pass


class ResourceError(TotalPosError):
    """A computation would exceed a configured size cap."""
    pass


class NumericError(TotalPosError):
    """An iterative method failed to converge or a self-check failed."""
    pass


class ConfigError(TotalPosError):
    """An environment setting could not be parsed."""
    pass


class ClassificationError(TotalPosError):
    """
    The matrix is not in the class a verification suite requires.

    Attributes:
        order: First compound order at which the requirement fails (None if
            the failure is not tied to a single order)
    """

    def __init__(self, message: str, order: Optional[int] = None):
        super().__init__(message)
        self.order = order
