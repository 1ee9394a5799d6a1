class DomainError(ValueError):
    """Input outside an operation's mathematical domain."""


class CapacityError(ValueError):
    """Input within the domain but beyond a hard size limit."""


class CrossCheckError(RuntimeError):
    """Two independent evaluation routes disagree beyond tolerance."""

    def __init__(self, message, *values):
        super().__init__(message)
        self.values = values
