"""
随机场 Ising 模型的单点热浴更新

一次扫描先按编号顺序更新偶格点，再更新奇格点。同色格点互不相邻，
因此同色内的并行更新与逐点顺序更新同分布。
"""

import numpy as np

from ..utils.numeric import plus_probability
from .state import ChainState


def local_fields(state: ChainState, sites: np.ndarray) -> np.ndarray:
    """
    格点处的有效场 Σ_{y∼x} σ_y + Σ_{v∈∂_ext, v∼x} ξ_v + ε h_x

    Args:
        state: 链状态
        sites: 顶点编号数组

    Returns:
        与 sites 对齐的有效场
    """
    graph = state.graph
    nbrs = graph.neighbor_table[sites]
    spins = np.where(nbrs >= 0, state.sigma[np.maximum(nbrs, 0)], 0).astype(np.float64)
    boundary = state.spec.boundary_field[sites]
    return spins.sum(axis=1) + boundary + state.field.scaled[sites]


def site_plus_probability(state: ChainState, site: int) -> float:
    """单点热浴取 +1 的概率 g((Σσ + Σξ + εh)/T)"""
    site_arr = np.array([int(site)], dtype=np.int64)
    return float(plus_probability(local_fields(state, site_arr) / state.spec.T)[0])


def heatbath_sweep(state: ChainState) -> ChainState:
    """原地完成一次热浴扫描"""
    for sites in state.spec.color_classes:
        if len(sites) == 0:
            continue
        prob = plus_probability(local_fields(state, sites) / state.spec.T)
        u = state.rng.random(len(sites))
        state.sigma[sites] = np.where(u < prob, 1, -1).astype(np.int8)
    state.sweep += 1
    return state
