"""Exception hierarchy shared by every module of the package."""


class KrylovKalmanError(Exception):
    """Base class for all errors raised by this package."""


class ZeroInverse(KrylovKalmanError, ZeroDivisionError):
    pass


class BadModulus(KrylovKalmanError, ValueError):
    pass


class DimensionMismatch(KrylovKalmanError, ValueError):
    pass


class FieldMismatch(KrylovKalmanError, ValueError):
    pass


class RangeOutOfBounds(KrylovKalmanError, IndexError):
    pass


class SingularDiagonal(KrylovKalmanError, ZeroDivisionError):
    pass


class NotADependentRow(KrylovKalmanError, ValueError):
    pass


class SizeCapExceeded(KrylovKalmanError, ValueError):
    pass


class FieldTooSmall(KrylovKalmanError, ValueError):
    pass


class InconsistentInput(KrylovKalmanError, ValueError):
    """A Krylov basis and the matrix it was supposedly built from disagree."""


class ParseError(KrylovKalmanError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            where += ": "
        super().__init__(where + message)


class HeaderMismatch(ParseError):
    """Matrix file payload disagrees with the dimensions in its header."""
