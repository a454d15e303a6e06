"""Exception hierarchy shared by every module."""


class SbmError(Exception):
    """Base class for library errors."""


class ValidationError(SbmError, ValueError):
    """Invalid parameters or configuration."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class DomainError(SbmError, ValueError):
    """Argument outside the domain of a function (pole, non-finite input)."""


class NumericalError(SbmError, ArithmeticError):
    """A numerical check failed (residue fit, reality assertion, singular matrix)."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)


class ConvergenceError(NumericalError):
    """Iterative procedure did not reach tolerance; carries the best estimate."""

    def __init__(self, message, estimate=None, error=None, diagnostics=None):
        self.estimate = estimate
        self.error = error
        super().__init__(message, diagnostics)
