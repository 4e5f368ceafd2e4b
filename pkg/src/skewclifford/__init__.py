"""Exact computations with graded skew Clifford algebras over finite fields."""

from __future__ import annotations

from .errors import (
    BudgetExceeded,
    DependentMatrices,
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    HypothesisWarning,
    InputError,
    MuConstraintViolation,
    NonHomogeneous,
    NonPrime,
    NotMuSymmetric,
    ParseError,
    ReducibleMinPoly,
    SchemaError,
    SkewCliffordError,
    TheoremViolation,
)
from .field import Field, enumerate_field, enumerate_projective, make_field
from .gsca import GscaPresentation, build_presentation, hilbert_dimensions, verify_presentation
from .pointcount import (
    GammaSet,
    PointCountReport,
    count_by_factorization,
    count_over,
    cross_validate,
    enumerate_gamma,
    stabilized_count,
)
from .quadforms import (
    Factorization,
    FactorizationSet,
    factorizations,
    factorizations_sweep,
    mu_rank,
    phi,
    tau,
    tau_inv,
)
from .quadsys import (
    QuadricSystem,
    check_independence,
    find_base_points,
    validate_system,
    vu_contains,
)
from .skewring import SkewPoly, SkewRing, check_normalizing_sequence, normal_form_word, poly_multiply
from .parsing import parse_form_expression, parse_input

__version__ = "0.1.0"
