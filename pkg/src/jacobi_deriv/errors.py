"""Exception types shared across the package.

The CLI maps these onto exit codes: FormatError -> 2, ParameterError and
DomainError -> 3, CertificateError -> 4.
"""


class JacobiDerivError(Exception):
    """Base class for all package-specific errors."""


class DomainError(JacobiDerivError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularityError(DomainError):
    """Evaluation requested at a point where the integrand diverges."""


class ParameterError(JacobiDerivError, ValueError):
    """A structurally valid but unsupported parameter combination."""


class WindowError(ParameterError):
    """The requested integration window does not fit the available samples."""


class FormatError(JacobiDerivError, ValueError):
    """Malformed input data (CSV structure, non-uniform grid, bad cells)."""


class EvaluationError(JacobiDerivError, ValueError):
    """A supplied function produced non-finite values on the window."""


class CertificateError(JacobiDerivError, RuntimeError):
    """A kernel failed its moment certificate at construction time.

    This signals a numerical defect in kernel assembly, never user error.
    """
