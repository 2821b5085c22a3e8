"""Errors shared across modules."""


class BudgetExceeded(RuntimeError):
    """A configured face/search budget was exhausted before completion."""

    def __init__(self, message: str, used: int = 0, limit: int = 0):
        super().__init__(message)
        self.used = used
        self.limit = limit
