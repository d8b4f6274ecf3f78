"""Optimal error exponents for testing white noise against a known bipartite
pure state under global, one-way LOCC, and separable measurements, plus a
numerically optimized three-round LOCC protocol and exact finite-blocklength
oracles.  All rates are in nats; +inf marks an infinite exponent.
"""

from .schmidt import (
    MeasureReport,
    NegativeCoefficient,
    NotNormalized,
    RankExceedsDimension,
    SchmidtSpectrum,
    SpectrumError,
    measures,
    validate_spectrum,
)
from .classical import (
    ExtendedExponent,
    LabeledDistPair,
    NeymanPearsonResult,
    chernoff_exponent,
    dist_pair,
    hoeffding_exponent,
    neyman_pearson_iid,
    relative_entropy,
    renyi_overlap,
)
from .exponents import (
    BThresholds,
    ExponentInterval,
    ExponentReport,
    PovmClass,
    SteinExponents,
    chernoff_exponent_class,
    helstrom_two_pure,
    hoeffding_a,
    hoeffding_b,
    one_way_b_thresholds,
    one_way_classical_pair,
    stein_exponents,
)
from .three_step import (
    ProtocolOutcomeDists,
    ThreeStepOptions,
    ThreeStepParams,
    ThreeStepResult,
    mub_basis,
    objective_f,
    one_way_embedding,
    optimize,
    outcome_distributions,
    subsets_of_basis,
)
from .oracle import (
    ArbitrationReport,
    OracleTrend,
    TrendRow,
    arbitrate_one_way_b,
    exponent_trend,
    global_mean_error,
    one_way_beta,
    zero_error_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "MeasureReport",
    "NegativeCoefficient",
    "NotNormalized",
    "RankExceedsDimension",
    "SchmidtSpectrum",
    "SpectrumError",
    "measures",
    "validate_spectrum",
    "ExtendedExponent",
    "LabeledDistPair",
    "NeymanPearsonResult",
    "chernoff_exponent",
    "dist_pair",
    "hoeffding_exponent",
    "neyman_pearson_iid",
    "relative_entropy",
    "renyi_overlap",
    "BThresholds",
    "ExponentInterval",
    "ExponentReport",
    "PovmClass",
    "SteinExponents",
    "chernoff_exponent_class",
    "helstrom_two_pure",
    "hoeffding_a",
    "hoeffding_b",
    "one_way_b_thresholds",
    "one_way_classical_pair",
    "stein_exponents",
    "ProtocolOutcomeDists",
    "ThreeStepOptions",
    "ThreeStepParams",
    "ThreeStepResult",
    "mub_basis",
    "objective_f",
    "one_way_embedding",
    "optimize",
    "outcome_distributions",
    "subsets_of_basis",
    "ArbitrationReport",
    "OracleTrend",
    "TrendRow",
    "arbitrate_one_way_b",
    "exponent_trend",
    "global_mean_error",
    "one_way_beta",
    "zero_error_threshold",
    "__version__",
]
