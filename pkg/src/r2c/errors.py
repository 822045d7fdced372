"""Exception and warning types raised across the package."""


class R2CError(Exception):
    """Base class for all errors raised by r2c."""


class TooFewObservations(R2CError, ValueError):
    pass


class NonFiniteInput(R2CError, ValueError):
    pass


class DimensionMismatch(R2CError, ValueError):
    pass


class LengthMismatch(R2CError, ValueError):
    pass


class NonPositivePrior(R2CError, ValueError):
    pass


class EmptyMargins(R2CError, ValueError):
    pass


class InvalidSpec(R2CError, ValueError):
    pass


class InvalidTheta(InvalidSpec):
    pass


class ConfigError(R2CError, ValueError):
    pass


class ParseError(R2CError, ValueError):
    """Malformed CSV input; carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class FitFailed(R2CError, ArithmeticError):
    """Every EM restart failed (numerical failure)."""


class SingularCovariance(FitFailed):
    pass


class DegenerateMassesWarning(UserWarning):
    """Sieve selection had no admissible level; u = 0 was returned."""
