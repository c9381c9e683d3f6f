"""簇外场的反集中与高温集中统计"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ..clusters.decomposition import ClusterStats, decompose
from ..core.constants import check_temperature
from ..core.exceptions import InvalidParameterError
from ..disorder.field import sample_field
from ..lattice.boundary import BoundaryCondition
from ..lattice.graph import LatticeGraph

logger = logging.getLogger(__name__)


def lower_tail_frequency(
    f_values,
    epsilon: float,
    region_size: int,
    T: float,
    weights: Optional[np.ndarray] = None,
) -> float:
    """F(h, ω) − ε²|Ω|/(2T²) ≤ −1 的（加权）频率"""
    T = check_temperature(T)
    f = np.asarray(f_values, dtype=np.float64)
    if len(f) == 0:
        return 0.0
    w = np.full(len(f), 1.0 / len(f)) if weights is None else np.asarray(weights, dtype=np.float64) / np.sum(weights)
    center = epsilon**2 * region_size / (2.0 * T**2)
    return float(np.dot(w, f - center <= -1.0))


@dataclass
class ClusterFieldVariance:
    """固定 ω 时簇外场 εh_C 在无序下的方差"""

    which: str
    cluster_size: int
    variance: float
    expected: float

    @property
    def ratio(self) -> float:
        return self.variance / self.expected if self.expected > 0 else float("nan")

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["ratio"] = self.ratio
        return out


def _field_matrix(graph: LatticeGraph, epsilon: float, seeds: Sequence[int]) -> np.ndarray:
    return np.stack([sample_field(graph, s, epsilon).scaled for s in seeds])


def cluster_field_variance(
    omega,
    graph: LatticeGraph,
    gamma: BoundaryCondition,
    epsilon: float,
    seeds: Sequence[int],
    which: str = "boundary",
) -> ClusterFieldVariance:
    """
    Var(εh_C) 与 ε²|C| 的比较

    Args:
        omega: 固定的边构型
        graph: 格点图
        gamma: FK 边界（which=boundary 时须有接线组）
        epsilon: 外场强度
        seeds: 外场种子
        which: boundary（C*）或 maximal（C◇）
    """
    if len(seeds) < 2:
        raise InvalidParameterError("至少需要两个外场种子")
    decomp = decompose(omega, graph, gamma)
    if which == "boundary":
        if decomp.boundary_label is None:
            raise InvalidParameterError("边界条件没有接线簇")
        label = decomp.boundary_label
    elif which == "maximal":
        label = decomp.maximal_label
    else:
        raise InvalidParameterError(f"未知簇: {which}")
    members = decomp.labels == label
    h_c = _field_matrix(graph, epsilon, seeds)[:, members].sum(axis=1)
    size = int(members.sum())
    return ClusterFieldVariance(
        which=which,
        cluster_size=size,
        variance=float(np.var(h_c, ddof=1)),
        expected=epsilon**2 * size,
    )


def quadratic_term_variance(
    omega,
    graph: LatticeGraph,
    gamma: BoundaryCondition,
    epsilon: float,
    T: float,
    seeds: Sequence[int],
) -> Dict[str, float]:
    """
    固定 ω 时 Σ_C ε²h_C²/(2T²) 的无序方差，与 ε⁴Σ|C|²/(2T⁴) 比较

    Returns:
        {"variance", "expected", "mean", "expected_mean"}
    """
    T = check_temperature(T)
    if len(seeds) < 2:
        raise InvalidParameterError("至少需要两个外场种子")
    decomp = decompose(omega, graph, gamma)
    fields = _field_matrix(graph, epsilon, seeds)
    kappa = decomp.kappa
    sums = np.stack([np.bincount(decomp.labels, weights=row, minlength=kappa) for row in fields])
    terms = (sums**2).sum(axis=1) / (2.0 * T**2)
    sizes = decomp.sizes.astype(np.float64)
    return {
        "variance": float(np.var(terms, ddof=1)),
        "expected": float(epsilon**4 * np.sum(sizes**2) / (2.0 * T**4)),
        "mean": float(terms.mean()),
        "expected_mean": float(epsilon**2 * graph.num_vertices / (2.0 * T**2)),
    }


def high_temperature_checks(stats: Sequence[ClusterStats], N: int, exponent: float = 0.1) -> Dict[str, float]:
    """高温下簇尺寸的集中性：Σ|C|⁴ 的均值与 max|C| ≤ N^{exponent} 的频率"""
    if not stats:
        return {"mean_sum_quartic": 0.0, "small_max_freq": 1.0, "mean_max_size": 0.0}
    quartic = np.array([s.sum_quartic for s in stats], dtype=np.float64)
    max_sizes = np.array([s.max_size for s in stats], dtype=np.float64)
    return {
        "mean_sum_quartic": float(quartic.mean()),
        "small_max_freq": float(np.mean(max_sizes <= N**exponent)),
        "mean_max_size": float(max_sizes.mean()),
    }
