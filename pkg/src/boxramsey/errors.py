"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Malformed instance, certificate, or parameter."""


class PreconditionError(InvalidInput):
    """An operation was called on an object that violates its precondition."""


class SizeError(InvalidInput):
    """Requested instance is too large to materialise."""


class BudgetExhausted(RuntimeError):
    """A search ran out of its node budget before reaching a verdict."""

    def __init__(self, message, used=None):
        super().__init__(message)
        self.used = used
