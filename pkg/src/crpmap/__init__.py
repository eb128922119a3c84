"""Partition scoring, search, and analysis for the Gauss-Gauss CRP mixture.

The model: a partition of n observations drawn from the Chinese
restaurant process with concentration alpha; each block gets a mean from
N(0, T) and its points are N(mean, Sigma).  This package scores
partitions under the resulting posterior, finds MAP partitions (exact,
interval dynamic program, local search, Gibbs), evaluates the
large-sample partition functional, and measures distances between
partition geometries.
"""

from .delta import (
    delta,
    delta_equal_width,
    delta_trace_form,
    delta_with_error,
    exponential_split_gain,
    maximize_delta_intervals,
    optimal_equal_width_count,
)
from .distributions import (
    Atomic,
    Empirical,
    Exponential,
    GaussianMixture1D,
    RegionMoments,
    UniformDisc,
    UniformSegment,
    adaptive_simpson,
    parse_distribution,
    region_moments,
)
from .errors import (
    CapacityError,
    ConfigError,
    CoverageError,
    CrpMapError,
    DegenerateRegionError,
    DimensionError,
    InvalidPartitionError,
    NotSPDError,
    NumericalError,
)
from .experiments import (
    CODE_VERSION,
    ExperimentConfig,
    config_from_mapping,
    load_config,
    parse_config,
    run_experiment,
    run_search,
    summarize_records,
)
from .geometry import (
    Hull,
    convex_hull,
    family_distance,
    hausdorff_distance,
    hull_family,
    hull_intersection_type,
    induced_partition,
    sym_diff_distance,
    sym_diff_distance_with_error,
)
from .gibbs import ChainConfig, ChainResult, gibbs_reassign_log_weights, map_via_mcmc, run_chain
from .model import (
    ClusterStats,
    ModelParams,
    cluster_log_marginal,
    cluster_stats,
    crp_log_prior,
    log_score_constant,
    partition_log_score,
    sample_crp,
    sample_dpmm,
)
from .partitions import Partition, bell_number, enumerate_partitions
from .regions import (
    ConvexPolygon,
    HalfPlanes,
    Interval,
    Predicate,
    Sector,
    SpacePartition,
    interval_partition,
)
from .search import is_map_weakly_convex, map_exhaustive, map_interval_dp, map_local_search

__version__ = CODE_VERSION

__all__ = [
    "Atomic",
    "CapacityError",
    "ChainConfig",
    "ChainResult",
    "ClusterStats",
    "ConfigError",
    "ConvexPolygon",
    "CoverageError",
    "CrpMapError",
    "DegenerateRegionError",
    "DimensionError",
    "Empirical",
    "ExperimentConfig",
    "Exponential",
    "GaussianMixture1D",
    "HalfPlanes",
    "Hull",
    "Interval",
    "InvalidPartitionError",
    "ModelParams",
    "NotSPDError",
    "NumericalError",
    "Partition",
    "Predicate",
    "RegionMoments",
    "Sector",
    "SpacePartition",
    "UniformDisc",
    "UniformSegment",
    "adaptive_simpson",
    "bell_number",
    "cluster_log_marginal",
    "cluster_stats",
    "config_from_mapping",
    "convex_hull",
    "crp_log_prior",
    "delta",
    "delta_equal_width",
    "delta_trace_form",
    "delta_with_error",
    "enumerate_partitions",
    "exponential_split_gain",
    "family_distance",
    "gibbs_reassign_log_weights",
    "hausdorff_distance",
    "hull_family",
    "hull_intersection_type",
    "induced_partition",
    "interval_partition",
    "is_map_weakly_convex",
    "load_config",
    "log_score_constant",
    "map_exhaustive",
    "map_interval_dp",
    "map_local_search",
    "map_via_mcmc",
    "maximize_delta_intervals",
    "optimal_equal_width_count",
    "parse_config",
    "parse_distribution",
    "partition_log_score",
    "region_moments",
    "run_chain",
    "run_experiment",
    "run_search",
    "sample_crp",
    "sample_dpmm",
    "summarize_records",
    "sym_diff_distance",
    "sym_diff_distance_with_error",
]
