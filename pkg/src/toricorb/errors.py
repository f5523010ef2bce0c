"""Exception hierarchy shared by every module."""


class ToricError(Exception):
    """Base class for all errors raised by toricorb."""


class DimensionError(ToricError):
    pass


class SingularMatrixError(ToricError):
    def __init__(self, message="matrix is singular", det=0):
        super().__init__(message)
        self.det = det


class RankError(ToricError):
    pass


class NoSolutionError(ToricError):
    pass


class ValidationError(ToricError):
    """Input data violates a combinatorial or arithmetic precondition."""


class NotRCharacteristicError(ToricError):
    pass


class NoAdmissibleRetractionError(ToricError):
    pass


class EnumerationCapError(ToricError):
    """The polytope is larger than the configured exhaustive-search cap."""
