"""Exception types shared across the package."""


class EquizetaError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EquizetaError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class NonConvergentError(EquizetaError, ArithmeticError):
    """A series or quadrature could not certify the requested tolerance.

    The partial result, when meaningful, is attached as ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SingularPointError(EquizetaError, ValueError):
    """Evaluation was requested at (or too close to) a singular point."""


class NotApplicableError(EquizetaError):
    """The requested quantity does not exist for this model (no analytic
    continuation, or a nonzero twisted-Laplacian kernel)."""


class SingularMatrixError(EquizetaError, ValueError):
    """A linear solve hit a singular restriction that the input invariants
    should have ruled out; signals corrupted input."""
