"""Exception hierarchy shared by all modules."""


class AovsError(Exception):
    """Base class for every error raised by this package."""


class DomainError(AovsError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericError(AovsError, ArithmeticError):
    """An iterative computation failed to converge or produced non-finite values."""

    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class FormatError(AovsError, ValueError):
    """A matrix file is malformed. ``row``/``col`` locate the problem when known."""

    def __init__(self, message, row=None, col=None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if col is not None:
            loc.append(f"column {col}")
        if loc:
            message = f"{message} (at {', '.join(loc)})"
        super().__init__(message)
        self.row = row
        self.col = col
