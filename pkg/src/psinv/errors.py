"""Exception hierarchy shared by all modules."""


class PsinvError(Exception):
    """Base class for errors raised by psinv."""


class PreconditionError(PsinvError, ValueError):
    """A numerical precondition of an operation is not satisfied."""


class GammaUndefinedError(PreconditionError):
    """Raised when gamma_n is requested with n*u >= 1."""


class NotNormalizedError(PreconditionError):
    """Raised when a series to be inverted does not have constant term 1."""


class CoincidentRootsError(PreconditionError):
    """Raised when an operation requires pairwise distinct roots."""


class NearMultipleRootError(PreconditionError):
    """Raised when |p'(a)| is too small to define a root condition number."""


class VacuousBoundError(PreconditionError):
    """Raised when a norm-wise bound has a nonpositive denominator."""


class ConvergenceError(PsinvError):
    """Raised when an iteration did not converge.

    The last iterate is available as ``last_value``.
    """

    def __init__(self, msg, last_value):
        super().__init__(msg)
        self.last_value = last_value
