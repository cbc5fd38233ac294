"""Exception hierarchy shared by all modules.

The CLI maps each family to a distinct exit status: configuration errors
to 1, precondition failures to 2 and numerical/runtime failures to 3.
"""


class DesitterDiracError(Exception):
    """Base class for every error raised on purpose by this package."""


class ConfigError(DesitterDiracError, ValueError):
    """Malformed or schema-violating input (exit status 1)."""


class PreconditionError(DesitterDiracError, ValueError):
    """Well-formed input that violates a mathematical precondition (exit status 2)."""


class DomainError(PreconditionError):
    """Argument outside the domain where a formula is defined."""


class UnsupportedConfiguration(PreconditionError):
    """Combination of options that an operation does not cover."""


class NumericalError(DesitterDiracError, ArithmeticError):
    """Failure during a computation (exit status 3)."""


class ConvergenceError(NumericalError):
    """An iterative procedure did not reach its tolerance."""


class TailBoundError(NumericalError):
    """A truncated infinite-time integral has an unacceptable tail bound.

    ``required_T`` carries the horizon that would make the bound acceptable.
    """

    def __init__(self, message, required_T=None):
        super().__init__(message)
        self.required_T = required_T
