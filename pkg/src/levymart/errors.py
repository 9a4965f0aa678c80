"""Exception hierarchy shared by every levymart module."""


class LevyMartError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(LevyMartError, ValueError):
    """An argument violates a documented precondition."""


class TruncationError(LevyMartError):
    """A computation needs cumulants or series terms beyond the known order."""


class RejectedSpecError(LevyMartError):
    """The cumulant sequence cannot come from any Kolmogorov measure."""


class DegenerateSpecError(LevyMartError):
    """The parameters make a required denominator vanish identically."""


class DomainError(LevyMartError, ValueError):
    """A closed form was evaluated outside its convergence domain."""
