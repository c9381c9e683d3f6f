"""
RFIM、带外场 FK 与 Edwards–Sokal 联合测度的对数权重

单构型函数用于核对与采样器，批量函数（*_log_weights）供精确枚举使用。
"""

import math
from typing import Optional, Tuple

import numpy as np

from ..clusters.decomposition import as_edge_config, decompose, wiring_links
from ..core.constants import check_p, check_temperature, p_from_temperature, temperature_from_p
from ..core.exceptions import InvalidParameterError
from ..disorder.field import DisorderField
from ..lattice.boundary import BoundaryCondition
from ..lattice.graph import LatticeGraph
from ..utils.numeric import log_2cosh


def as_spin_config(sigma, graph: LatticeGraph) -> np.ndarray:
    arr = np.asarray(sigma, dtype=np.int64)
    if arr.shape[-1] != graph.num_vertices:
        raise InvalidParameterError(f"自旋构型长度 {arr.shape} 与顶点数 {graph.num_vertices} 不一致")
    if not np.isin(arr, (-1, 1)).all():
        raise InvalidParameterError("自旋只能取 ±1")
    return arr


def _field_or_zero(field: Optional[DisorderField], graph: LatticeGraph) -> DisorderField:
    field = field if field is not None else DisorderField.zero(graph)
    field.check_graph(graph)
    return field


def resolve_p_T(p: Optional[float], T: Optional[float]) -> Tuple[float, float]:
    """
    由 p、T 之一按 p = 1 − exp(−2/T) 补全另一个

    两者同时给出时视为独立参数：边权用 p，簇外场因子用 T。
    """
    if T is None and p is None:
        raise InvalidParameterError("p 与 T 至少给出一个")
    if T is None:
        T = temperature_from_p(p)
    T = check_temperature(T)
    if p is None:
        p = p_from_temperature(T)
    return check_p(p), T


def _check_fk_boundary(gamma: Optional[BoundaryCondition]) -> BoundaryCondition:
    gamma = gamma if gamma is not None else BoundaryCondition.free()
    if not gamma.is_fk:
        raise InvalidParameterError("FK 权重要求 free / wired / partition 边界")
    return gamma


# ---------------------------------------------------------------------- RFIM


def ising_log_weights(
    sigmas: np.ndarray,
    graph: LatticeGraph,
    T: float,
    xi: Optional[BoundaryCondition] = None,
    field: Optional[DisorderField] = None,
) -> np.ndarray:
    """批量计算 −H/T，sigmas 形状 (K, |V|)"""
    T = check_temperature(T)
    xi = xi if xi is not None else BoundaryCondition.zero(graph)
    if not xi.is_ising:
        raise InvalidParameterError("Ising 权重要求 IsingSpin 边界")
    field = _field_or_zero(field, graph)
    sig = np.atleast_2d(sigmas).astype(np.float64)
    pair = (sig[:, graph.edges[:, 0]] * sig[:, graph.edges[:, 1]]).sum(axis=1)
    external = sig @ (xi.boundary_field(graph) + field.scaled)
    return (pair + external) / T


def ising_log_weight(
    sigma,
    graph: LatticeGraph,
    T: float,
    xi: Optional[BoundaryCondition] = None,
    field: Optional[DisorderField] = None,
) -> float:
    """
    RFIM 的 −H/T

    H = −(Σ_{u∼v} σ_u σ_v + Σ_{u∈V, v∈∂_ext, u∼v} σ_u ξ_v + Σ_u ε h_u σ_u)

    Args:
        sigma: ±1 自旋构型
        graph: 格点图
        T: 温度
        xi: IsingSpin 边界（默认 ξ ≡ 0）
        field: 外场（默认 ε = 0）
    """
    sigma = as_spin_config(sigma, graph)
    return float(ising_log_weights(sigma[None, :], graph, T, xi, field)[0])


# ---------------------------------------------------------------------- FK


def fk_log_weight(
    omega,
    graph: LatticeGraph,
    p: Optional[float] = None,
    gamma: Optional[BoundaryCondition] = None,
    field: Optional[DisorderField] = None,
    T: Optional[float] = None,
) -> float:
    """
    带外场 FK 测度的对数权重

    Σ_e [ω(e) ln p + (1−ω(e)) ln(1−p)] + Σ_C ln(2cosh(ε h_C / T))，簇按 γ 接线计算。
    """
    p, T = resolve_p_T(p, T)
    gamma = _check_fk_boundary(gamma)
    field = _field_or_zero(field, graph)
    open_mask = as_edge_config(omega, graph)
    decomp = decompose(open_mask, graph, gamma)
    n_open = int(open_mask.sum())
    edge_part = n_open * math.log(p) + (graph.num_edges - n_open) * math.log1p(-p)
    x = field.epsilon * decomp.field_sums(field) / T
    return float(edge_part + np.sum(log_2cosh(x)))


def _propagate_labels(open_mask: np.ndarray, graph: LatticeGraph, wu: np.ndarray, wv: np.ndarray, num_ghosts: int) -> np.ndarray:
    """批量最小标号传播，open_mask 形状 (K, |E|)；返回 (K, |V|+g) 的簇根（簇内最小编号）"""
    K = open_mask.shape[0]
    n = graph.num_vertices + num_ghosts
    labels = np.tile(np.arange(n, dtype=np.int64), (K, 1))
    eu, ev = graph.edges[:, 0], graph.edges[:, 1]
    while True:
        before = labels.copy()
        for g_u, g_v in zip(wu, wv):
            m = np.minimum(labels[:, g_u], labels[:, g_v])
            labels[:, g_u] = m
            labels[:, g_v] = m
        for e in range(len(eu)):
            active = open_mask[:, e]
            m = np.minimum(labels[:, eu[e]], labels[:, ev[e]])
            labels[:, eu[e]] = np.where(active, m, labels[:, eu[e]])
            labels[:, ev[e]] = np.where(active, m, labels[:, ev[e]])
        # 指针跳跃
        labels = np.take_along_axis(labels, labels, axis=1)
        if np.array_equal(labels, before):
            return labels


def fk_log_weights(
    omegas: np.ndarray,
    graph: LatticeGraph,
    p: float,
    T: float,
    gamma: Optional[BoundaryCondition] = None,
    field: Optional[DisorderField] = None,
) -> np.ndarray:
    """批量 FK 对数权重，omegas 形状 (K, |E|)"""
    gamma = _check_fk_boundary(gamma)
    field = _field_or_zero(field, graph)
    open_mask = np.atleast_2d(omegas).astype(bool)
    wu, wv, num_ghosts = wiring_links(graph, gamma)
    roots = _propagate_labels(open_mask, graph, wu, wv, num_ghosts)
    K, n = roots.shape
    weights = np.concatenate([field.scaled, np.zeros(num_ghosts)]) / T
    flat = (roots + (np.arange(K) * n)[:, None]).ravel()
    sums = np.bincount(flat, weights=np.tile(weights, K), minlength=K * n).reshape(K, n)
    is_root = roots == np.arange(n)[None, :]
    cluster_part = np.where(is_root, log_2cosh(sums), 0.0).sum(axis=1)
    n_open = open_mask.sum(axis=1)
    edge_part = n_open * math.log(p) + (graph.num_edges - n_open) * math.log1p(-p)
    return edge_part + cluster_part


# ---------------------------------------------------------------------- Edwards–Sokal


def es_joint_log_weights(
    sigmas: np.ndarray,
    omegas: np.ndarray,
    graph: LatticeGraph,
    p: float,
    T: float,
    field: Optional[DisorderField] = None,
) -> np.ndarray:
    """批量联合对数权重，开边连接异号自旋时为 −inf"""
    field = _field_or_zero(field, graph)
    sig = np.atleast_2d(sigmas).astype(np.int64)
    open_mask = np.atleast_2d(omegas).astype(bool)
    agree = sig[:, graph.edges[:, 0]] == sig[:, graph.edges[:, 1]]
    n_open = open_mask.sum(axis=1)
    edge_part = n_open * math.log(p) + (graph.num_edges - n_open) * math.log1p(-p)
    forbidden = (open_mask & ~agree).any(axis=1)
    spin_part = sig.astype(np.float64) @ field.scaled / T
    return np.where(forbidden, -np.inf, edge_part + spin_part)


def es_joint_log_weight(
    sigma,
    omega,
    graph: LatticeGraph,
    p: Optional[float] = None,
    field: Optional[DisorderField] = None,
    T: Optional[float] = None,
) -> float:
    """
    Edwards–Sokal 联合权重（0 边界）

    Π_e [(1−p)δ(ω_e,0) + p δ(ω_e,1) δ(σ_x,σ_y)] · exp(Σ_x ε h_x σ_x / T) 的对数
    """
    p, T = resolve_p_T(p, T)
    sigma = as_spin_config(sigma, graph)
    open_mask = as_edge_config(omega, graph)
    return float(es_joint_log_weights(sigma[None, :], open_mask[None, :], graph, p, T, field)[0])
