from typing import Optional


class ConvergenceError(Exception):
    """A numerical limit did not settle within its step budget."""

    def __init__(self, message: str, increment: Optional[float] = None):
        super().__init__(message)
        self.increment = increment
