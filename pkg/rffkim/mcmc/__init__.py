"""马尔可夫链采样：RFIM 热浴与 FK 的 Edwards–Sokal 更新"""

from .autocorr import (
    autocorrelation,
    batch_means_error,
    integrated_autocorrelation_time,
    statistical_inefficiency,
)
from .edwards_sokal import (
    SpinClusters,
    check_consistency,
    edge_open_probabilities,
    es_sweep,
    sample_edges_given_spins,
    sample_spins_given_edges,
    spin_clusters,
)
from .heatbath import heatbath_sweep, local_fields, site_plus_probability
from .runner import SAMPLE_COLUMNS, Sample, collect_samples, run_chain, run_replica, samples_frame, sweep_once
from .state import ChainPlan, ChainState, ModelSpec, initial_state, substream

__all__ = [
    "ChainPlan",
    "ChainState",
    "ModelSpec",
    "initial_state",
    "substream",
    "heatbath_sweep",
    "local_fields",
    "site_plus_probability",
    "SpinClusters",
    "check_consistency",
    "edge_open_probabilities",
    "es_sweep",
    "sample_edges_given_spins",
    "sample_spins_given_edges",
    "spin_clusters",
    "Sample",
    "collect_samples",
    "run_chain",
    "run_replica",
    "SAMPLE_COLUMNS",
    "samples_frame",
    "sweep_once",
    "autocorrelation",
    "batch_means_error",
    "integrated_autocorrelation_time",
    "statistical_inefficiency",
]
