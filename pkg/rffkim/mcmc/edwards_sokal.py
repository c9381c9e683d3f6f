"""
FK 随机簇模型的 Edwards–Sokal 更新

(a) 给定 σ，每条两端自旋相同的边独立以概率 p 打开；
(b) 给定 ω，每个簇 C 独立以概率 g(ε h_C / T) 取 +1。

FK 接线组通过恒开的幽灵节点并入同一簇。IsingSpin 边界下，与外部自旋 ±1
相连的边界边也参与 (a)，打开后所在簇被钳制为该外部自旋。
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..clusters.decomposition import label_clusters, wiring_links
from ..core.exceptions import CorruptedStateError
from ..disorder.field import DisorderField
from ..utils.numeric import plus_probability
from .state import ChainState, ModelSpec

logger = logging.getLogger(__name__)


@dataclass
class SpinClusters:
    """
    (b) 步所需的簇结构

    Attributes:
        labels: 顶点簇编号
        plus_prob: 每簇取 +1 的概率
        clamp: 每簇的钳制符号，0 表示不钳制
    """

    labels: np.ndarray
    plus_prob: np.ndarray
    clamp: np.ndarray

    @property
    def kappa(self) -> int:
        return len(self.plus_prob)

    def spin_probability(self, sigma: np.ndarray) -> float:
        """给定 ω 时取到 σ 的条件概率（σ 在簇内不恒定时为 0）"""
        sigma = np.asarray(sigma)
        cluster_spin = np.zeros(self.kappa, dtype=np.int64)
        cluster_spin[self.labels] = sigma
        if not np.array_equal(cluster_spin[self.labels], sigma):
            return 0.0
        prob = np.where(cluster_spin == 1, self.plus_prob, 1.0 - self.plus_prob)
        clamped = self.clamp != 0
        prob[clamped] = (cluster_spin[clamped] == self.clamp[clamped]).astype(np.float64)
        return float(np.prod(prob))


def edge_open_probabilities(sigma: np.ndarray, spec: ModelSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    (a) 步中每条边的打开概率

    Returns:
        (图中各边, 各幽灵边界边) 的打开概率
    """
    graph = spec.graph
    p = spec.p
    agree = sigma[graph.edges[:, 0]] == sigma[graph.edges[:, 1]]
    ghost_vertices, ghost_signs = spec.boundary.ghost_links(graph)
    ghost_agree = sigma[ghost_vertices] == ghost_signs
    return np.where(agree, p, 0.0), np.where(ghost_agree, p, 0.0)


def spin_clusters(
    omega: np.ndarray,
    ghost_omega: np.ndarray,
    spec: ModelSpec,
    field: DisorderField,
) -> SpinClusters:
    """计算 (b) 步的簇、取正概率与钳制"""
    graph = spec.graph
    wu, wv, num_wiring = wiring_links(graph, spec.fk_boundary)
    ghost_vertices, ghost_signs = spec.boundary.ghost_links(graph)
    # 幽灵节点：接线组在前，其后依次为外部 +1、−1
    plus_ghost = graph.num_vertices + num_wiring
    ghost_targets = np.where(ghost_signs > 0, plus_ghost, plus_ghost + 1)
    edges = graph.edges[omega]
    us = np.concatenate([edges[:, 0], wu, ghost_vertices[ghost_omega]])
    vs = np.concatenate([edges[:, 1], wv, ghost_targets[ghost_omega]])
    _, labels, ghost_labels = label_clusters(graph.num_vertices, us, vs, num_wiring + 2)

    kappa = int(labels.max()) + 1 if len(labels) else 0
    h_c = np.bincount(labels, weights=field.scaled, minlength=kappa)
    clamp = np.zeros(kappa, dtype=np.int64)
    for sign, label in ((1, ghost_labels[num_wiring]), (-1, ghost_labels[num_wiring + 1])):
        if label >= 0:
            if clamp[label] not in (0, sign):
                raise CorruptedStateError("同一簇同时连到 +1 与 −1 外部自旋")
            clamp[label] = sign
    return SpinClusters(labels=labels, plus_prob=plus_probability(h_c / spec.T), clamp=clamp)


def check_consistency(state: ChainState) -> None:
    """开边两端自旋须相同，开的幽灵边须与外部自旋一致，接线组内自旋须相同"""
    graph = state.graph
    sigma = state.sigma
    edges = graph.edges[state.omega]
    bad = np.flatnonzero(sigma[edges[:, 0]] != sigma[edges[:, 1]])
    if len(bad):
        u, v = edges[bad[0]]
        raise CorruptedStateError(
            f"开边 {tuple(graph.coords[u])}–{tuple(graph.coords[v])} 两端自旋不同"
        )
    ghost_vertices, ghost_signs = state.spec.boundary.ghost_links(graph)
    if np.any(sigma[ghost_vertices[state.ghost_omega]] != ghost_signs[state.ghost_omega]):
        raise CorruptedStateError("开的边界边与外部自旋不一致")
    for group in state.spec.fk_boundary.wiring_groups(graph):
        if len(np.unique(sigma[group])) > 1:
            raise CorruptedStateError("接线组内自旋不一致")


def sample_edges_given_spins(
    sigma: np.ndarray,
    spec: ModelSpec,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray]:
    """(a) 步：按 σ 抽取 (ω, 幽灵边)"""
    edge_prob, ghost_prob = edge_open_probabilities(sigma, spec)
    omega = rng.random(len(edge_prob)) < edge_prob
    ghost_omega = rng.random(len(ghost_prob)) < ghost_prob
    return omega, ghost_omega


def sample_spins_given_edges(
    omega: np.ndarray,
    ghost_omega: np.ndarray,
    spec: ModelSpec,
    field: DisorderField,
    rng: np.random.Generator,
) -> np.ndarray:
    """(b) 步：逐簇抽取自旋"""
    clusters = spin_clusters(omega, ghost_omega, spec, field)
    u = rng.random(clusters.kappa)
    cluster_spin = np.where(u < clusters.plus_prob, 1, -1)
    cluster_spin = np.where(clusters.clamp != 0, clusters.clamp, cluster_spin)
    return cluster_spin[clusters.labels].astype(np.int8)


def es_sweep(state: ChainState) -> ChainState:
    """
    原地完成一次 Edwards–Sokal 扫描

    Raises:
        CorruptedStateError: 输入状态不在联合分布的支撑内
    """
    check_consistency(state)
    state.omega, state.ghost_omega = sample_edges_given_spins(state.sigma, state.spec, state.rng)
    state.sigma = sample_spins_given_edges(
        state.omega, state.ghost_omega, state.spec, state.field, state.rng
    )
    state.sweep += 1
    return state
