"""Certificates for the regularity conditions of Fano double hypersurfaces.

The package checks, on explicit polynomial input, the pointwise
regularity conditions that carve out the good locus in the parameter
space of double covers of hypersurfaces, and independently re-derives
the closed-form codimension bounds for the loci where each condition
fails.  Exact arithmetic throughout: certifying computations run over
the rationals, sampling computations over a configurable odd prime
field.
"""

from .fields import GF, QQ, DEFAULT_SAMPLING_PRIME, Field, FieldError, PrimeField
from .ideals import (
    Budget,
    BudgetExceeded,
    GroebnerBasis,
    Ideal,
    groebner,
    is_regular_sequence,
    krull_dim,
    projective_empty,
    smooth_complete_intersection,
)
from .linalg import SymMatrix, quad_to_sym, rank_stratum_codim, restrict_rank, sym_rank
from .poly import (
    LinearSubspace,
    SparsePoly,
    homogeneous_components,
    jacobian,
    poly_from_json,
    poly_to_json,
    restrict_linear,
    shift_to_point,
)
from .regularity import (
    CheckOptions,
    FamilyParams,
    LocalModel,
    PointClass,
    RegularityReport,
    WeightedPoint,
    check_point,
    classify_point,
    local_model,
)
from .strata import CodimTable, condition_codims, cross_check, theorem2_bound, xi

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "BudgetExceeded",
    "CheckOptions",
    "CodimTable",
    "DEFAULT_SAMPLING_PRIME",
    "FamilyParams",
    "Field",
    "FieldError",
    "GF",
    "GroebnerBasis",
    "Ideal",
    "LinearSubspace",
    "LocalModel",
    "PointClass",
    "PrimeField",
    "QQ",
    "RegularityReport",
    "SparsePoly",
    "SymMatrix",
    "WeightedPoint",
    "check_point",
    "classify_point",
    "condition_codims",
    "cross_check",
    "groebner",
    "homogeneous_components",
    "is_regular_sequence",
    "jacobian",
    "krull_dim",
    "local_model",
    "poly_from_json",
    "poly_to_json",
    "projective_empty",
    "quad_to_sym",
    "rank_stratum_codim",
    "restrict_linear",
    "restrict_rank",
    "shift_to_point",
    "smooth_complete_intersection",
    "sym_rank",
    "theorem2_bound",
    "xi",
]
