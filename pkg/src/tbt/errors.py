"""Exception hierarchy.  Every class carries the CLI exit code it maps to."""


class TbtError(Exception):
    exit_code = 1


class ParseError(TbtError, ValueError):
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: " if column is not None else f"line {line}: "
        super().__init__(where + message)


class DimensionMismatch(TbtError, ValueError):
    exit_code = 3


DimensionError = DimensionMismatch


class SingularMatrix(TbtError, ArithmeticError):
    exit_code = 4


class RankDeficient(TbtError, ValueError):
    exit_code = 5


class AllInfinite(TbtError, ValueError):
    exit_code = 6


class IncomparableAtInfinity(TbtError, ValueError):
    exit_code = 7


class EmptyCombination(TbtError, ValueError):
    exit_code = 8


class UnboundedEnumeration(TbtError):
    exit_code = 9


class PointNotInPolytope(TbtError, ValueError):
    exit_code = 10


class PointNotInLinearSpace(TbtError, ValueError):
    exit_code = 11


class InfeasiblePoint(TbtError, ValueError):
    exit_code = 12


class UnrenderableDimension(TbtError):
    exit_code = 13


class BlueRedMismatch(TbtError, AssertionError):
    """Blue Rule and Red Rule disagreed; carries the offending input."""

    exit_code = 14

    def __init__(self, values, point, blue, red):
        self.values = values
        self.point = point
        self.blue = blue
        self.red = red
        super().__init__(f"blue={blue} red={red} at x={point}; p={values}")


class FiberCapExceeded(TbtError):
    exit_code = 15
