"""Multipartite concurrence for pure states, W-class closed forms,
partition relations, mixed-state lower bounds, and convex-roof upper
estimates, with a self-verification harness."""

from .bounds import (
    BoundReport,
    ConditionReport,
    bound_eq5,
    bound_eq6,
    bound_theorem4,
    condition_check_theorem4,
    eq6_coefficient,
    tilde_c3_sq,
)
from .combinatorics import (
    Partition,
    binomial,
    format_partition,
    half_binomial_sum,
    pair_singleton_partitions,
    parse_partition,
    proper_subsets,
    set_partitions,
)
from .concurrence import (
    bipartite_concurrence_pure,
    coarse_grain,
    concurrence_pure,
    partition_concurrence_pure,
    reduced_purity,
)
from .roof import (
    Decomposition,
    EstimatorConfig,
    RoofEstimate,
    mix_decomposition,
    reconstruction_error,
    roof_upper_bound,
    spectral_decompose,
    wootters_concurrence_2qubit,
)
from .states import (
    DensityMatrix,
    PureState,
    density_from_pure,
    partial_trace,
    purity,
)
from .verify import run_verify
from .wclass import (
    WCoefficients,
    verify_theorem3,
    w_balance_identity,
    w_concurrence_sq,
    w_pair_partition_concurrence_sq,
    w_reduced_linear_entropy,
    w_tilde_sum_sq,
    w_to_state,
)

__all__ = [
    "BoundReport",
    "ConditionReport",
    "Decomposition",
    "DensityMatrix",
    "EstimatorConfig",
    "Partition",
    "PureState",
    "RoofEstimate",
    "WCoefficients",
    "binomial",
    "bipartite_concurrence_pure",
    "bound_eq5",
    "bound_eq6",
    "bound_theorem4",
    "coarse_grain",
    "concurrence_pure",
    "condition_check_theorem4",
    "density_from_pure",
    "eq6_coefficient",
    "format_partition",
    "half_binomial_sum",
    "mix_decomposition",
    "pair_singleton_partitions",
    "parse_partition",
    "partial_trace",
    "partition_concurrence_pure",
    "proper_subsets",
    "purity",
    "reconstruction_error",
    "reduced_purity",
    "roof_upper_bound",
    "run_verify",
    "set_partitions",
    "spectral_decompose",
    "tilde_c3_sq",
    "verify_theorem3",
    "w_balance_identity",
    "w_concurrence_sq",
    "w_pair_partition_concurrence_sq",
    "w_reduced_linear_entropy",
    "w_tilde_sum_sq",
    "w_to_state",
    "wootters_concurrence_2qubit",
]

__version__ = "0.1.0"
