"""粗粒化诊断：最外闭区域与良连通性"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..core.exceptions import InvalidGeometryError
from ..lattice.boundary import BoundaryCondition
from ..lattice.graph import LatticeGraph
from .decomposition import as_edge_config, decompose, label_clusters

logger = logging.getLogger(__name__)


def _check_blocks(graph: LatticeGraph, M: int, require_even: bool = False) -> int:
    if graph.kind != "box":
        raise InvalidGeometryError("粗粒化诊断要求图为盒子 Λ_N")
    N = graph.n
    if M < 1 or N % (2 * M) != 0:
        raise InvalidGeometryError(f"分块要求 N 能被 2M 整除: N={N}, M={M}")
    if require_even and M % 2 != 0:
        raise InvalidGeometryError(f"良连通性要求 M 为偶数: M={M}")
    return N


def block_centers(graph: LatticeGraph, M: int) -> List[Tuple[int, int]]:
    """2M-盒子划分的中心 u_i，按 (x, y) 字典序"""
    N = _check_blocks(graph, M)
    cx, cy = graph.center
    offsets = [-N + 2 * M * (2 * a + 1) for a in range(N // (2 * M))]
    return [(cx + ox, cy + oy) for ox in offsets for oy in offsets]


@dataclass
class OutmostRegion:
    """
    最外闭区域

    Attributes:
        centers: 各块中心 u_i
        regions: 各块的 Ω_i 顶点编号（空数组表示 Ω_i = ∅）
    """

    M: int
    centers: List[Tuple[int, int]]
    regions: List[np.ndarray] = field(default_factory=list)

    @property
    def eta(self) -> int:
        """非空区域个数 η(O)"""
        return sum(1 for r in self.regions if len(r) > 0)

    @property
    def union(self) -> np.ndarray:
        if not self.regions:
            return np.zeros(0, dtype=np.int64)
        return np.unique(np.concatenate(self.regions))


def is_closed_region(graph: LatticeGraph, open_mask: np.ndarray, members: np.ndarray) -> bool:
    """Ω 的边边界是否全部关闭"""
    inside = np.zeros(graph.num_vertices, dtype=bool)
    inside[members] = True
    crossing = inside[graph.edges[:, 0]] != inside[graph.edges[:, 1]]
    return not bool((crossing & open_mask).any())


def outmost_closed_region(omega, graph: LatticeGraph, M: int) -> OutmostRegion:
    """
    计算每个 2M-块 B_i 中包含 Λ_M(u_i) 的极大闭区域

    边界全闭的区域恰是若干开簇的并。Ω_i 取完全落在 B_i 内的所有簇之并，
    前提是与 Λ_M(u_i) 相交的簇都落在 B_i 内；否则 Ω_i = ∅。

    Args:
        omega: Λ_N 上的边构型
        graph: 盒子 Λ_N
        M: 内盒参数，要求 2M | N

    Returns:
        OutmostRegion
    """
    centers = block_centers(graph, M)
    open_mask = as_edge_config(omega, graph)
    decomp = decompose(open_mask, graph, BoundaryCondition.free())
    labels = decomp.labels
    k = decomp.kappa

    lo = np.full((k, 2), np.iinfo(np.int64).max, dtype=np.int64)
    hi = np.full((k, 2), np.iinfo(np.int64).min, dtype=np.int64)
    for axis in range(2):
        np.minimum.at(lo[:, axis], labels, graph.coords[:, axis])
        np.maximum.at(hi[:, axis], labels, graph.coords[:, axis])

    result = OutmostRegion(M=M, centers=centers)
    for u in centers:
        u_arr = np.asarray(u)
        inside_block = np.all((lo >= u_arr - 2 * M) & (hi <= u_arr + 2 * M), axis=1)
        core = graph.box_vertices(M, u)
        touching = np.unique(labels[core])
        if not inside_block[touching].all():
            result.regions.append(np.zeros(0, dtype=np.int64))
            continue
        result.regions.append(np.flatnonzero(inside_block[labels]))
    logger.debug("最外闭区域: M=%d, η=%d/%d", M, result.eta, len(centers))
    return result


@dataclass
class WellConnectedResult:
    """良连通性判定结果；main_cluster 以簇内最小顶点编号标识"""

    well_connected: bool
    main_cluster: Optional[int]
    large_clusters: int


def annuli_mask(graph: LatticeGraph, M: int) -> np.ndarray:
    """各块环形区域 Λ_{2M}(u_i) \\ Λ_M(u_i) 之并的顶点掩码"""
    mask = np.zeros(graph.num_vertices, dtype=bool)
    for u in block_centers(graph, M):
        d = np.abs(graph.coords - np.asarray(u)).max(axis=1)
        mask |= (d > M) & (d <= 2 * M)
    return mask


def well_connected(omega, graph: LatticeGraph, M: int) -> WellConnectedResult:
    """
    ω 限制到环形区域之并后，是否恰有一个 l∞ 直径 ≥ N/2 的簇

    Args:
        omega: Λ_N 上的边构型
        graph: 盒子 Λ_N
        M: 偶数，2M | N
    """
    N = _check_blocks(graph, M, require_even=True)
    open_mask = as_edge_config(omega, graph)
    in_annuli = annuli_mask(graph, M)
    keep = open_mask & in_annuli[graph.edges[:, 0]] & in_annuli[graph.edges[:, 1]]
    edges = graph.edges[keep]
    _, labels, _ = label_clusters(graph.num_vertices, edges[:, 0], edges[:, 1])

    k = int(labels.max()) + 1
    lo = np.full((k, 2), np.iinfo(np.int64).max, dtype=np.int64)
    hi = np.full((k, 2), np.iinfo(np.int64).min, dtype=np.int64)
    for axis in range(2):
        np.minimum.at(lo[:, axis], labels, graph.coords[:, axis])
        np.maximum.at(hi[:, axis], labels, graph.coords[:, axis])
    diameters = (hi - lo).max(axis=1)
    in_region = np.zeros(k, dtype=bool)
    in_region[labels[in_annuli]] = True
    large = np.flatnonzero(in_region & (2 * diameters >= N))
    if len(large) == 1:
        first_member = int(np.flatnonzero(labels == large[0])[0])
        return WellConnectedResult(True, first_member, 1)
    return WellConnectedResult(False, None, int(len(large)))
