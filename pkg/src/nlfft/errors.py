class NLFTError(Exception):
    """Base class for library errors."""


class InvalidInput(NLFTError, ValueError):
    """Input outside the domain of the requested operation."""


class NumericalFailure(NLFTError, ArithmeticError):
    """A computation lost the positivity or pairing it relies on."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
