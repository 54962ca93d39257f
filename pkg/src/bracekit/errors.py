class BraceError(Exception):
    """Base class for bracekit errors."""


class SpecError(BraceError, ValueError):
    """Invalid input data or a construction whose hypotheses fail."""


class SingularMatrixError(BraceError, ArithmeticError):
    pass


class CapExceeded(BraceError):
    """An exhaustive computation was requested above the configured cap."""
