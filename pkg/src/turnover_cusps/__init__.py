"""Turnover-group holonomies in SL(4,R): cusps, slices, cohomology and characters."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BackendMismatchError,
    CohomologyInconsistencyError,
    ConfigurationError,
    DeterminantError,
    DimensionError,
    DomainError,
    FieldMismatchError,
    InvalidInputError,
    IsolatedPointCountError,
    NumericOverflowError,
    TurnoverError,
    UnsupportedReductionError,
)
from .field import ExactAngle, QuadraticNumber, turn  # noqa: E402
from .linalg import Matrix  # noqa: E402
from .words import TurnoverPresentation, Word  # noqa: E402
from .holonomy import (  # noqa: E402
    Representation,
    cusp_translation,
    diagonal_representation,
    evaluate_word,
    hyperbolic_cusp_holonomy,
    similarity,
    slice_representation,
    verify_relations,
)

__all__ = [
    "__version__",
    "BackendMismatchError",
    "CohomologyInconsistencyError",
    "ConfigurationError",
    "DeterminantError",
    "DimensionError",
    "DomainError",
    "ExactAngle",
    "FieldMismatchError",
    "InvalidInputError",
    "IsolatedPointCountError",
    "Matrix",
    "NumericOverflowError",
    "QuadraticNumber",
    "Representation",
    "TurnoverError",
    "TurnoverPresentation",
    "UnsupportedReductionError",
    "Word",
    "cusp_translation",
    "diagonal_representation",
    "evaluate_word",
    "hyperbolic_cusp_holonomy",
    "similarity",
    "slice_representation",
    "turn",
    "verify_relations",
]
