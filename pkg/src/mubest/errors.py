"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of a function."""


class InputError(ValueError):
    """Malformed or inconsistent input data (shapes, NaNs, missing fields)."""


class NumericalError(ArithmeticError):
    """A computation produced a non-finite or otherwise unusable result."""
