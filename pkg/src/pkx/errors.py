"""Exception hierarchy for the series engine."""


class PkxError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZeroCoefficient(PkxError, ZeroDivisionError):
    pass


class DivisionByZeroSeries(PkxError, ZeroDivisionError):
    pass


class ParseError(PkxError, ValueError):
    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = tuple(expected)
        detail = f"{message} at offset {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class UnsupportedExpression(PkxError, ValueError):
    """Input lies outside the generalized Puiseux fragment (nested logs, z^a, ...)."""


class EssentialSingularity(PkxError):
    def __init__(self, message, subexpression=None):
        self.subexpression = subexpression
        super().__init__(message)


class InsufficientOrder(PkxError):
    """An operand series is not precise enough; `needed` is a hint for the next request."""

    def __init__(self, message, needed=None):
        self.needed = needed
        super().__init__(message)


class NonElementaryIntegral(PkxError):
    pass


class ResourceExhausted(PkxError):
    pass
