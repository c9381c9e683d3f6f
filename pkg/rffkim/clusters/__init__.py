"""簇分解与簇统计"""

from .unionfind import DisjointSet
from .decomposition import (
    Cluster,
    ClusterDecomposition,
    ClusterStats,
    as_edge_config,
    cluster_stats,
    decompose,
    f_functional,
    label_clusters,
)
from .crossing import CrossingEvents, crossing_events
from .regions import OutmostRegion, WellConnectedResult, block_centers, outmost_closed_region, well_connected

__all__ = [
    "DisjointSet",
    "Cluster",
    "ClusterDecomposition",
    "ClusterStats",
    "as_edge_config",
    "cluster_stats",
    "decompose",
    "f_functional",
    "label_clusters",
    "CrossingEvents",
    "crossing_events",
    "OutmostRegion",
    "WellConnectedResult",
    "block_centers",
    "outmost_closed_region",
    "well_connected",
]
