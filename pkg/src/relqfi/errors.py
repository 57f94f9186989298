"""Exception types raised by relqfi."""


class RelqfiError(Exception):
    """Base class for all library errors."""


class InvalidParameters(RelqfiError, ValueError):
    pass


class InvalidDomain(InvalidParameters):
    pass


class LambdaOutOfRange(InvalidParameters):
    pass


class NonConvergence(RelqfiError, ArithmeticError):
    pass


class NoSignChange(RelqfiError, ValueError):
    pass


class DegenerateInput(RelqfiError, ValueError):
    pass


class DivisionByZero(RelqfiError, ZeroDivisionError):
    pass


class ZeroDenominator(RelqfiError, ZeroDivisionError):
    pass


class DegenerateDenominator(RelqfiError, ArithmeticError):
    pass


class RadicandNegative(RelqfiError, ArithmeticError):
    pass


class InvariantViolation(RelqfiError, RuntimeError):
    pass


class RldUndefined(RelqfiError, ValueError):
    """The right logarithmic derivative does not exist for a rank-deficient state."""


class EigenFailure(RelqfiError, ValueError):
    pass


class GridTooCoarse(RelqfiError, RuntimeError):
    pass


class NoPeak(RelqfiError, RuntimeError):
    pass
