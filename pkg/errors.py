"""
Exception hierarchy for the Ostrowski bound toolkit.

Every error raised on purpose derives from OstrowskiError and also from the
builtin category it belongs to, so callers may catch either.
"""


class OstrowskiError(Exception):
    """Base class for all toolkit errors."""


class ExprSyntaxError(OstrowskiError, ValueError):
    """
    Malformed expression text.

    Parameters:
    - message: What went wrong
    - offset: Byte offset into the source text where parsing stopped
    """

    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class EmptyExpressionError(ExprSyntaxError):
    def __init__(self):
        super().__init__("empty expression", 0)


class UnknownIdentifierError(ExprSyntaxError):
    def __init__(self, name, offset):
        super().__init__(f"unknown identifier '{name}'", offset)
        self.name = name


class DomainViolation(OstrowskiError, ArithmeticError):
    """
    A subexpression was evaluated outside its mathematical domain
    (ln of a nonpositive number, sqrt of a negative number, division by zero,
    non-real power).
    """

    def __init__(self, subexpression, point, reason="domain violation"):
        super().__init__(f"{reason} in '{subexpression}' at t={point!r}")
        self.subexpression = subexpression
        self.point = point


class NondifferentiablePoint(OstrowskiError, ArithmeticError):
    """The value exists but the first derivative does not (abs at 0, sqrt at 0)."""

    def __init__(self, subexpression, point):
        super().__init__(f"'{subexpression}' is not differentiable at t={point!r}")
        self.subexpression = subexpression
        self.point = point


class QuadratureError(OstrowskiError, ArithmeticError):
    """Adaptive integration hit its cell cap before meeting the tolerance."""

    def __init__(self, message, worst_cell=None):
        if worst_cell is not None:
            message = f"{message}; worst cell [{worst_cell[0]!r}, {worst_cell[1]!r}]"
        super().__init__(message)
        self.worst_cell = worst_cell


class PreconditionError(OstrowskiError, ValueError):
    """A hypothesis of a bound or seminorm does not hold for the given input."""

    def __init__(self, detail, point=None):
        if point is not None:
            detail = f"{detail} (at t={point!r})"
        super().__init__(detail)
        self.point = point
