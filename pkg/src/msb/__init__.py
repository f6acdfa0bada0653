"""Signed barcodes, Hilbert decompositions, and matching distances for
one- and two-parameter persistence modules presented over a prime field."""

from .algebra import (
    BettiResult,
    ChainPair,
    GradedMatrix,
    GradedValidityError,
    KernelCheckError,
    Presentation,
    UnsupportedDimension,
    betti,
    direct_sum,
    homology_presentation,
    kernel_basis,
    minimize_presentation,
    pointwise_dim,
    validate_graded,
)
from .grades import (
    Barcode,
    DimensionMismatch,
    Grade,
    SignedBarcode,
    as_grade,
    barcode_eq,
    barcode_union,
    dist_inf,
    dist_one,
    join,
    leq,
    reduce_signed,
)
from .generators import (
    PerturbResult,
    PerturbSpec,
    SplitMix64,
    gen_chain,
    gen_free,
    gen_hook,
    gen_one_param_interval,
    gen_random,
    gen_staircase,
    perturb,
)
from .hilbert import (
    hilbert_distance,
    hilbert_equal,
    hilbert_eval,
    minimal_hilbert_decomposition,
)
from .io import (
    Bifiltration,
    Cell,
    ParseError,
    chain_to_presentation,
    parse_any,
    parse_bifiltration,
    parse_chain_pair,
    parse_presentation,
    parse_signed_barcode,
    serialize_bifiltration,
    serialize_chain_pair,
    serialize_presentation,
    serialize_signed_barcode,
)
from .matching import (
    BRUTE_FORCE_CAP,
    MatchingResult,
    bottleneck,
    bottleneck_signed,
    brute_force_matching,
    eps_bijection_exists,
    presentation_pair_cost,
    wasserstein,
    wasserstein_signed,
)
from .stability import StabilityReport, StabilityTrial, run_stability

__version__ = "0.1.0"

__all__ = [
    "Barcode",
    "BettiResult",
    "Bifiltration",
    "BRUTE_FORCE_CAP",
    "Cell",
    "ChainPair",
    "DimensionMismatch",
    "Grade",
    "GradedMatrix",
    "GradedValidityError",
    "KernelCheckError",
    "MatchingResult",
    "ParseError",
    "PerturbResult",
    "PerturbSpec",
    "Presentation",
    "SignedBarcode",
    "SplitMix64",
    "StabilityReport",
    "StabilityTrial",
    "UnsupportedDimension",
    "as_grade",
    "barcode_eq",
    "barcode_union",
    "betti",
    "bottleneck",
    "bottleneck_signed",
    "brute_force_matching",
    "chain_to_presentation",
    "direct_sum",
    "dist_inf",
    "dist_one",
    "eps_bijection_exists",
    "gen_chain",
    "gen_free",
    "gen_hook",
    "gen_one_param_interval",
    "gen_random",
    "gen_staircase",
    "hilbert_distance",
    "hilbert_equal",
    "hilbert_eval",
    "homology_presentation",
    "join",
    "kernel_basis",
    "leq",
    "minimal_hilbert_decomposition",
    "minimize_presentation",
    "parse_any",
    "parse_bifiltration",
    "parse_chain_pair",
    "parse_presentation",
    "parse_signed_barcode",
    "perturb",
    "pointwise_dim",
    "presentation_pair_cost",
    "reduce_signed",
    "run_stability",
    "serialize_bifiltration",
    "serialize_chain_pair",
    "serialize_presentation",
    "serialize_signed_barcode",
    "validate_graded",
    "wasserstein",
    "wasserstein_signed",
]
