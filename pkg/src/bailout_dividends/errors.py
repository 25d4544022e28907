"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a documented precondition."""


class NumericalError(RuntimeError):
    """A solver or inversion routine failed to converge.

    Carries a short diagnostic message (bracket endpoints, scan trace, ...)
    so callers can report what was attempted.
    """
