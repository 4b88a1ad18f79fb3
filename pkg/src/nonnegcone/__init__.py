"""Numerical laboratory for the cone of polynomials that preserve
entrywise nonnegativity of n-by-n matrices."""

from .core import (
    NonPositiveInput,
    NoConvergence,
    Polynomial,
    StochasticDecomposition,
    eval_matrix,
    eval_scalar,
    min_entry,
    perron_normalize,
    sample_stochastic,
)
from .exact import (
    IllConditioned,
    NotNonnegative,
    RationalPolynomial,
    SosDecomposition,
    is_nonneg_on_halfline,
    polya_szego_decompose,
    refute_halfline,
)
from .families import (
    Alpha,
    ConjectureGap,
    FamilySpec,
    InvalidSpec,
    LoewyGeneral,
    alpha_family,
    build,
    conjecture_family,
    family_with_t,
    loewy_general,
    necessary_conditions,
    projection_gap_example,
    spec_from_json_dict,
    spec_to_json_dict,
    split_alpha,
)
from .membership import (
    BadBracket,
    ExactMember,
    NoRefutationFound,
    NoUpperRefutation,
    Refuted,
    SearchConfig,
    TraceResult,
    Witness,
    boundary_offset,
    confirm_witness,
    max_t,
    refute,
    scalar_walk_check,
    trace_slice,
    verdict_to_json,
)
from .volume import (
    CSV_HEADER,
    VolumeEstimate,
    compare_experiment,
    estimate_cone_fraction,
    estimate_projection_fraction,
    estimates_csv,
    sample_ball,
    wilson_interval,
)

__all__ = [
    # core
    "NonPositiveInput",
    "NoConvergence",
    "Polynomial",
    "StochasticDecomposition",
    "eval_matrix",
    "eval_scalar",
    "min_entry",
    "perron_normalize",
    "sample_stochastic",
    # exact half-line arithmetic
    "IllConditioned",
    "NotNonnegative",
    "RationalPolynomial",
    "SosDecomposition",
    "is_nonneg_on_halfline",
    "polya_szego_decompose",
    "refute_halfline",
    # structured families
    "Alpha",
    "ConjectureGap",
    "FamilySpec",
    "InvalidSpec",
    "LoewyGeneral",
    "alpha_family",
    "build",
    "conjecture_family",
    "family_with_t",
    "loewy_general",
    "necessary_conditions",
    "projection_gap_example",
    "spec_from_json_dict",
    "spec_to_json_dict",
    "split_alpha",
    # membership search
    "BadBracket",
    "ExactMember",
    "NoRefutationFound",
    "NoUpperRefutation",
    "Refuted",
    "SearchConfig",
    "TraceResult",
    "Witness",
    "boundary_offset",
    "confirm_witness",
    "max_t",
    "refute",
    "scalar_walk_check",
    "trace_slice",
    "verdict_to_json",
    # volume estimation
    "CSV_HEADER",
    "VolumeEstimate",
    "compare_experiment",
    "estimate_cone_fraction",
    "estimate_projection_fraction",
    "estimates_csv",
    "sample_ball",
    "wilson_interval",
]
