"""Errors raised across the package."""


class QMError(Exception):
    """Base class for all package errors."""


class InsufficientPrecision(QMError):
    """A coefficient beyond the guaranteed order was requested."""


class ZeroInverse(QMError):
    """Inversion of a value indistinguishable from zero."""


class NotHolomorphic(QMError):
    """An integrand with a pole was passed to the holomorphic-only path."""


class NotConstantDifference(QMError):
    """A difference expected to be a constant has q- or t-dependence."""


class SingularSystem(QMError):
    """A linear system expected to determine constants has no solution."""


class DivisionByZero(QMError):
    """Division by the zero form."""


class ZeroForm(QMError):
    """The zero form where a nonzero form is required."""


class ValenceViolation(QMError):
    """A divisor degree does not match weight/12."""


class UnsupportedPoint(QMError):
    """A point outside {infinity, [i], [rho], rational-j} was requested."""


class NoSolution(QMError):
    """A pole-killing exponent equation has no solution for these inputs."""


class WeightMismatch(QMError):
    """Operands of different weights where a single weight is required."""


class NotHomogeneous(QMError):
    """A sum of different weights where a homogeneous form is required."""


class BolViolation(QMError):
    """delta^(k-1) of a weight-(2-k) form failed to be modular."""


class SystemInconsistent(QMError):
    """The decomposition linear system has no exact solution."""


class UnknownName(QMError):
    """An unknown name in an expression."""


class ParseError(QMError):
    """A syntax error in an expression, with position information."""

    def __init__(self, message, line=1, col=None):
        if col is not None:
            message = "%s (line %d, column %d)" % (message, line, col)
        super().__init__(message)
        self.line = line
        self.col = col
