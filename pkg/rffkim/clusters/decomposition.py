"""
边构型在边界条件 γ 下的簇分解与簇统计量

每个接线组对应一个幽灵节点，组内顶点与幽灵节点之间的连接恒为开。
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.constants import check_temperature
from ..core.exceptions import InvalidParameterError
from ..disorder.field import DisorderField
from ..lattice.boundary import BoundaryCondition
from ..lattice.graph import LatticeGraph
from ..utils.numeric import log_cosh
from .unionfind import DisjointSet, ordered_labels

logger = logging.getLogger(__name__)


def as_edge_config(omega, graph: LatticeGraph) -> np.ndarray:
    """校验并转换为布尔边构型"""
    arr = np.asarray(omega)
    if arr.shape != (graph.num_edges,):
        raise InvalidParameterError(f"边构型长度 {arr.shape} 与边数 {graph.num_edges} 不一致")
    if arr.dtype != bool:
        if not np.isin(arr, (0, 1)).all():
            raise InvalidParameterError("边构型只能取 0/1")
        arr = arr.astype(bool)
    return arr


def label_clusters(
    num_vertices: int,
    us: np.ndarray,
    vs: np.ndarray,
    num_ghosts: int = 0,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    按开边（及幽灵连接）计算簇编号

    Args:
        num_vertices: 真实顶点数
        us, vs: 开边端点（幽灵节点编号为 num_vertices + g）
        num_ghosts: 幽灵节点数

    Returns:
        (父数组, 顶点簇编号, 幽灵簇编号)
    """
    dsu = DisjointSet(num_vertices + num_ghosts)
    dsu.union_edges(us, vs)
    roots = dsu.find_all()
    labels, ghost_labels = ordered_labels(roots, num_vertices)
    return roots, labels, ghost_labels


@dataclass(frozen=True)
class Cluster:
    """单个簇的视图"""

    index: int
    members: np.ndarray
    size: int
    field_sum: Optional[float]
    touches_boundary: bool
    is_boundary_cluster: bool
    is_maximal: bool


@dataclass(eq=False)
class ClusterDecomposition:
    """
    簇分解

    Attributes:
        graph: 所在图
        parents: 完全压缩的并查集父数组（含幽灵节点）
        num_ghosts: 幽灵节点数
        labels: 每个顶点的簇编号，按簇内最小顶点编号排序
        sizes: 每个簇的顶点数
        boundary_label: 边界簇 C* 的编号（free 边界为 None）；多组划分边界下取含幽灵节点的簇中最大者
        boundary_labels: 所有含幽灵节点（接线组）的簇编号，升序
        maximal_label: 最大簇 C◇ 的编号（同样大小取编号最小者）
    """

    graph: LatticeGraph
    parents: np.ndarray
    num_ghosts: int
    labels: np.ndarray
    ghost_labels: np.ndarray
    sizes: np.ndarray
    boundary_label: Optional[int]
    maximal_label: int
    boundary_labels: Tuple[int, ...] = ()

    @property
    def kappa(self) -> int:
        return int(len(self.sizes))

    def members(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.labels == label)

    def field_sums(self, field: DisorderField) -> np.ndarray:
        """每个簇的 h_C（只对图内顶点求和）"""
        field.check_graph(self.graph)
        return np.bincount(self.labels, weights=field.values, minlength=self.kappa)

    def touches_boundary(self) -> np.ndarray:
        """每个簇是否含 ∂_int G 的顶点"""
        out = np.zeros(self.kappa, dtype=bool)
        out[self.labels[self.graph.interior_boundary]] = True
        return out

    def second_size(self) -> int:
        if self.kappa < 2:
            return 0
        return int(np.sort(self.sizes)[-2])

    def clusters(self, field: Optional[DisorderField] = None) -> List[Cluster]:
        sums = self.field_sums(field) if field is not None else None
        touching = self.touches_boundary()
        order = np.argsort(self.labels, kind="stable")
        bounds = np.concatenate([[0], np.cumsum(self.sizes)])
        return [
            Cluster(
                index=c,
                members=order[bounds[c] : bounds[c + 1]],
                size=int(self.sizes[c]),
                field_sum=None if sums is None else float(sums[c]),
                touches_boundary=bool(touching[c]),
                is_boundary_cluster=c in self.boundary_labels,
                is_maximal=self.maximal_label == c,
            )
            for c in range(self.kappa)
        ]

    def same_cluster_pairs(self) -> int:
        """同簇有序顶点对数 Σ|C|²"""
        return int(sum(int(s) ** 2 for s in self.sizes))


def wiring_links(graph: LatticeGraph, gamma: BoundaryCondition) -> Tuple[np.ndarray, np.ndarray, int]:
    """接线组到幽灵节点的连接（恒开）"""
    groups = gamma.wiring_groups(graph)
    us, vs = [], []
    for g, members in enumerate(groups):
        us.append(members)
        vs.append(np.full(len(members), graph.num_vertices + g, dtype=np.int64))
    if not us:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, 0
    return np.concatenate(us), np.concatenate(vs), len(groups)


def decompose(omega, graph: LatticeGraph, gamma: BoundaryCondition) -> ClusterDecomposition:
    """
    计算边构型在 γ 接线下的簇

    Args:
        omega: 长度 |E| 的 0/1 边构型
        graph: 格点图
        gamma: FK 边界条件（Ising 边界按 free 处理）

    Returns:
        ClusterDecomposition
    """
    open_mask = as_edge_config(omega, graph)
    wu, wv, num_ghosts = wiring_links(graph, gamma)
    edges = graph.edges[open_mask]
    us = np.concatenate([edges[:, 0], wu])
    vs = np.concatenate([edges[:, 1], wv])
    parents, labels, ghost_labels = label_clusters(graph.num_vertices, us, vs, num_ghosts)
    sizes = np.bincount(labels)
    boundary_labels = tuple(sorted({int(g) for g in ghost_labels if g >= 0}))
    boundary_label = None
    if boundary_labels:
        # 同样大小取编号最小者
        boundary_label = max(boundary_labels, key=lambda c: (int(sizes[c]), -c))
    return ClusterDecomposition(
        graph=graph,
        parents=parents,
        num_ghosts=num_ghosts,
        labels=labels,
        ghost_labels=ghost_labels,
        sizes=sizes,
        boundary_label=boundary_label,
        maximal_label=int(np.argmax(sizes)),
        boundary_labels=boundary_labels,
    )


def f_functional(decomp: ClusterDecomposition, field: DisorderField, T: float) -> float:
    """F(h, ω) = Σ_C ln cosh(ε h_C / T)"""
    T = check_temperature(T)
    if field.epsilon == 0.0:
        return 0.0
    x = field.epsilon * decomp.field_sums(field) / T
    return float(np.sum(log_cosh(x)))


@dataclass
class ClusterStats:
    """单个样本的簇统计量"""

    kappa: int
    max_size: int
    second_size: int
    sum_sq: int
    sum_quartic: int
    boundary_size: int
    boundary_is_maximal: bool
    F_value: float
    field_sq_term: float
    field_quartic_term: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def cluster_stats(
    decomp: ClusterDecomposition,
    field: Optional[DisorderField] = None,
    T: Optional[float] = None,
) -> ClusterStats:
    """
    计算簇统计量

    field 或 T 缺省时，与外场有关的项取 0。
    """
    sizes = decomp.sizes
    boundary_size = int(sizes[decomp.boundary_label]) if decomp.boundary_label is not None else 0
    F = sq_term = quartic_term = 0.0
    if field is not None and T is not None and field.epsilon > 0:
        T = check_temperature(T)
        x = field.epsilon * decomp.field_sums(field) / T
        F = float(np.sum(log_cosh(x)))
        sq_term = float(np.sum(x**2) / 2.0)
        quartic_term = float(np.sum(x**4) / 2.0)
    return ClusterStats(
        kappa=decomp.kappa,
        max_size=int(sizes.max()),
        second_size=decomp.second_size(),
        sum_sq=decomp.same_cluster_pairs(),
        sum_quartic=int(sum(int(s) ** 4 for s in sizes)),
        boundary_size=boundary_size,
        boundary_is_maximal=decomp.boundary_label is not None
        and int(sizes[decomp.boundary_label]) == int(sizes.max()),
        F_value=F,
        field_sq_term=sq_term,
        field_quartic_term=quartic_term,
    )
