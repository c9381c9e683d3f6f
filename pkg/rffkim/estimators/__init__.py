"""Monte Carlo 估计量"""

from .anticoncentration import (
    ClusterFieldVariance,
    cluster_field_variance,
    high_temperature_checks,
    lower_tail_frequency,
    quadratic_term_variance,
)
from .base import EstimateWithError, RegimeReport, grouped_jackknife, jackknife, summarize
from .influence import CorrelationLength, boundary_influence, correlation_length
from .ldp import TailTable, boundary_overlap_deficit, ldp_tail, p_regime, tail_frequencies
from .partition import (
    OVERLAP_THRESHOLD,
    SamplePair,
    bar_free_energy,
    estimate_partition_ratio,
    field_energy,
    partition_ratio_from_samples,
    reciprocity,
    sample_pair,
)
from .pstats import PStatistics, p0_margin, p_statistics
from .tv import DecouplingBound, decoupling_bound, estimate_tv, estimate_tv_rn, log_density_terms

__all__ = [
    "EstimateWithError",
    "RegimeReport",
    "jackknife",
    "grouped_jackknife",
    "summarize",
    "OVERLAP_THRESHOLD",
    "SamplePair",
    "bar_free_energy",
    "estimate_partition_ratio",
    "field_energy",
    "partition_ratio_from_samples",
    "reciprocity",
    "sample_pair",
    "DecouplingBound",
    "decoupling_bound",
    "estimate_tv",
    "estimate_tv_rn",
    "log_density_terms",
    "PStatistics",
    "p0_margin",
    "p_statistics",
    "CorrelationLength",
    "boundary_influence",
    "correlation_length",
    "TailTable",
    "boundary_overlap_deficit",
    "ldp_tail",
    "p_regime",
    "tail_frequencies",
    "ClusterFieldVariance",
    "cluster_field_variance",
    "high_temperature_checks",
    "lower_tail_frequency",
    "quadratic_term_variance",
]
