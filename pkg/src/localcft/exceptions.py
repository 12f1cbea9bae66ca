"""Exception types shared across the package."""


class PrecisionError(ArithmeticError):
    """Raised when a result cannot be certified at the working precision."""


class IntegrityError(RuntimeError):
    """Raised when an internal cross-check fails; signals a bug upstream."""


class DataError(ValueError):
    """Raised on unusable input data (unreadable file, empty table, ...)."""
