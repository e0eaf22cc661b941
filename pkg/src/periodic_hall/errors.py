"""Shared exception types."""


class MismatchedContext(ValueError):
    """Operands belong to different ambient rings / categories / periods."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured resource budget."""


class UnsupportedPresentation(ValueError):
    """No generator-relation presentation is available for this period."""


class InternalCheckFailed(AssertionError):
    """A live consistency assertion failed; indicates a bug, not bad input."""
