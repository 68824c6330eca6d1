"""Exception types raised across the package."""


class GravWitnessError(Exception):
    """Base class for all package errors."""


class InvalidInputError(GravWitnessError, ValueError):
    pass


class PhaseRangeError(GravWitnessError, OverflowError):
    pass


class SingularSeparationError(InvalidInputError):
    pass


class InvalidStateError(InvalidInputError):
    pass


class GridTooLargeError(GravWitnessError, MemoryError):
    pass


class ValidationError(InvalidInputError):
    """Raised by ``validate`` with every violated invariant collected."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
