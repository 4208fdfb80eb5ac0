"""Exception hierarchy shared by every module of the package."""


class TurnoverError(Exception):
    """Base class for all errors raised by this package."""


class BackendMismatchError(TurnoverError, TypeError):
    """Exact and floating-point data were combined in one operation."""


class FieldMismatchError(TurnoverError, TypeError):
    """Two exact scalars live in different quadratic fields."""


class ConfigurationError(TurnoverError, ValueError):
    """A required tolerance or option was not supplied."""


class DimensionError(TurnoverError, ValueError):
    pass


class DeterminantError(TurnoverError, ValueError):
    pass


class DomainError(TurnoverError, ValueError):
    """Parameters outside the domain of a constructor."""


class NumericOverflowError(TurnoverError, ArithmeticError):
    pass


class InvalidInputError(TurnoverError, ValueError):
    pass


class UnsupportedReductionError(TurnoverError, ValueError):
    """A representation does not preserve the block structure required."""


class CohomologyInconsistencyError(TurnoverError, ArithmeticError):
    """Rank computations disagree (e.g. a negative first cohomology)."""


class IsolatedPointCountError(TurnoverError, AssertionError):
    """The isolated-point enumeration did not produce the expected count.

    The enumeration result and per-case tallies are attached so callers
    can report the discrepancy instead of hiding it.
    """

    def __init__(self, message, classes, tallies, expected):
        super().__init__(message)
        self.classes = classes
        self.tallies = tallies
        self.expected = expected
