"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DivergenceError(DomainError):
    """The requested quantity is infinite for these parameters."""


class UnboundedOperatorError(DomainError):
    """The projection is unbounded, i.e. sigma <= -(n+1)."""


class DegenerateParameterError(DomainError):
    """Parameters hit a pole of the Gamma prefactor (mu <= 0)."""


class NumericError(ArithmeticError):
    """A numerical procedure failed to produce a trustworthy value.

    Attributes
    ----------
    partial : float or None
        Partial result at the point of failure (e.g. a truncated series).
    bound : float or None
        Size of the last term or another indication of the remaining error.
    point : ndarray or None
        Sample point at which a non-finite value appeared.
    """

    def __init__(self, message, partial=None, bound=None, point=None):
        super().__init__(message)
        self.partial = partial
        self.bound = bound
        self.point = point


class InadmissibleIntegrandError(NumericError):
    """The integrand does not decay fast enough for the requested measure."""
