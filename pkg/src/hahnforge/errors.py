"""Exception types shared across the package.

Every domain error raised by the library derives from HahnForgeError, so the
CLI can map failures to stable exit codes without inspecting messages.
"""


class HahnForgeError(Exception):
    """Base class for all library errors."""


class DivisionByZero(HahnForgeError, ZeroDivisionError):
    """Inversion of the zero element of a field."""


class NotAUnit(HahnForgeError, ArithmeticError):
    """Inversion of a Witt element whose residue is zero."""


class ZeroPolynomial(HahnForgeError, ValueError):
    """Root finding on the identically-zero polynomial."""


class PrecisionLoss(HahnForgeError, ArithmeticError):
    """A result cannot be resolved at the requested truncation."""


class SigmaMismatch(HahnForgeError, ValueError):
    """Multinomial coefficient requested with inconsistent index sum."""


class FieldExtensionExceeded(HahnForgeError, ArithmeticError):
    """A residue equation needs a field extension beyond the configured bound."""


class NoProgress(HahnForgeError, ArithmeticError):
    """Root expansion stalled without shrinking the residual."""


class BoundViolation(HahnForgeError, ArithmeticError):
    """A root prefix failed its declared residual bound.

    Carries the offending valuation in the `valuation` attribute.
    """

    def __init__(self, message, valuation=None):
        super().__init__(message)
        self.valuation = valuation


class ZeroOrderType(HahnForgeError, ValueError):
    """Replication order type of the empty support."""


class ParseError(HahnForgeError, ValueError):
    """Syntax error with position information."""

    def __init__(self, message, line=1, col=0, expected=None):
        super().__init__(message)
        self.line = line
        self.col = col
        self.expected = expected
