"""Exception hierarchy shared by the solvers."""


class NCQMError(Exception):
    """Base class for all package errors."""


class DomainError(NCQMError, ValueError):
    """An argument lies outside the domain of the function."""


class NoBoundState(NCQMError):
    """The requested bound state does not exist (e.g. beyond critical coupling)."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class ConvergenceError(NCQMError):
    """An iterative procedure failed to converge."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class SingularAlgebraError(NCQMError):
    """beta = 1 - eps12 - eps21 vanishes or a transformation is singular."""


class IdentityViolation(NCQMError):
    """A commutator identity failed on the polynomial test basis."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class CalibrationError(NCQMError):
    """Root-finding for the Omega calibration could not be bracketed."""

    def __init__(self, message, sweep=None):
        super().__init__(message)
        self.sweep = sweep or []


class DatasetError(NCQMError):
    """Malformed experimental dataset."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
