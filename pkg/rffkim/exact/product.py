"""乘积测度的全变差与偶子格单点条件分布"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import GuardLimits, get_config
from ..core.constants import check_temperature
from ..core.exceptions import InvalidParameterError
from ..disorder.field import DisorderField
from ..lattice.boundary import BoundaryCondition
from ..lattice.graph import LatticeGraph
from ..utils.numeric import plus_probability
from .weights import as_spin_config

Pair = Tuple[np.ndarray, np.ndarray]


def _check_prob(vec) -> np.ndarray:
    arr = np.asarray(vec, dtype=np.float64)
    if arr.ndim != 1 or (arr < 0).any() or abs(arr.sum() - 1.0) > 1e-12:
        raise InvalidParameterError("分量必须是概率向量")
    return arr


def product_tv(pairs: Sequence[Pair], guards: Optional[GuardLimits] = None) -> float:
    """
    独立分量乘积测度 ⊗μ_i 与 ⊗ν_i 之间的精确全变差

    Args:
        pairs: [(μ_i, ν_i)]，同一分量的两个概率向量长度相同

    Returns:
        ½ Σ |Πμ − Πν|
    """
    guards = guards or get_config().guards
    if len(pairs) > guards.max_product_components:
        raise InvalidParameterError(
            f"分量数 {len(pairs)} 超过 max_product_components={guards.max_product_components}"
        )
    mu = np.ones(1)
    nu = np.ones(1)
    for a, b in pairs:
        a, b = _check_prob(a), _check_prob(b)
        if a.shape != b.shape:
            raise InvalidParameterError("同一分量的两个分布长度不同")
        mu = np.multiply.outer(mu, a).ravel()
        nu = np.multiply.outer(nu, b).ravel()
    return 0.5 * float(np.abs(mu - nu).sum())


def two_point_pair(tv: float) -> Pair:
    """全变差恰为 tv 的一对两点分布"""
    if not 0.0 <= tv <= 1.0:
        raise InvalidParameterError(f"分量全变差须在 [0, 1]: {tv}")
    return np.array([0.5 + tv / 2, 0.5 - tv / 2]), np.array([0.5 - tv / 2, 0.5 + tv / 2])


def check_product_tv_bound(component_tvs: Sequence[float], n: int) -> float:
    """
    n 个独立分量（每个分量为全变差给定的两点分布对）的乘积全变差

    Args:
        component_tvs: 长度为 1（对所有分量广播）或 n 的全变差列表
        n: 分量个数

    Returns:
        乘积测度的精确全变差
    """
    values = list(component_tvs)
    if n < 1:
        raise InvalidParameterError(f"分量个数必须为正: n={n}")
    if len(values) == 1:
        values = values * n
    if len(values) != n:
        raise InvalidParameterError(f"全变差列表长度 {len(values)} 与 n={n} 不一致")
    return product_tv([two_point_pair(t) for t in values])


def single_site_tv(a, b):
    """对数几率为 2a 与 2b 的单自旋分布之间的全变差 ½|tanh a − tanh b|"""
    return 0.5 * np.abs(np.tanh(np.asarray(a, dtype=np.float64)) - np.tanh(np.asarray(b, dtype=np.float64)))


def single_site_tv_lower_bound(eps_h: float, T: float) -> float:
    """
    单点热浴条件分布在加入外场 εh 前后的全变差下界

    由 g'(t) = ½ sech² t ≥ ½ e^{−2|t|} 与 |N_x| ≤ 4 得
    (ε|h| / 2T)·exp(−2(4 + ε|h|)/T)；T ≥ 2 时它不小于 (ε|h|/4T)·e^{−4−ε|h|}。
    """
    T = check_temperature(T)
    a = abs(eps_h)
    return a / (2.0 * T) * math.exp(-2.0 * (4.0 + a) / T)


def even_sublattice(graph: LatticeGraph) -> np.ndarray:
    """U = (2Z)² ∩ V 的顶点编号"""
    even = (graph.coords[:, 0] % 2 == 0) & (graph.coords[:, 1] % 2 == 0)
    return np.flatnonzero(even)


@dataclass
class SublatticeTV:
    """偶子格条件分布的全变差"""

    sites: np.ndarray
    site_tvs: np.ndarray
    site_lower_bounds: np.ndarray
    product_tv: Optional[float]

    @property
    def bounds_hold(self) -> bool:
        return bool(np.all(self.site_tvs >= self.site_lower_bounds - 1e-15))


def sublattice_conditional_tv(
    graph: LatticeGraph,
    sigma,
    T: float,
    xi: Optional[BoundaryCondition],
    field: DisorderField,
) -> SublatticeTV:
    """
    给定 U 以外的自旋，U 上各点条件独立；比较有/无外场时的条件乘积测度

    Args:
        graph: 格点图
        sigma: 完整自旋构型（只使用 U 以外的取值）
        T: 温度
        xi: IsingSpin 边界
        field: 外场

    Returns:
        SublatticeTV；分量数超过守卫时 product_tv 为 None
    """
    T = check_temperature(T)
    sigma = as_spin_config(sigma, graph)
    xi = xi if xi is not None else BoundaryCondition.zero(graph)
    field.check_graph(graph)
    sites = even_sublattice(graph)
    table = graph.neighbor_table[sites]
    local = np.where(table >= 0, sigma[np.maximum(table, 0)], 0).sum(axis=1).astype(np.float64)
    local += xi.boundary_field(graph)[sites]
    eps_h = field.scaled[sites]
    with_field = plus_probability((local + eps_h) / T)
    without = plus_probability(local / T)
    site_tvs = single_site_tv((local + eps_h) / T, local / T)
    bounds = np.array([single_site_tv_lower_bound(x, T) for x in eps_h])

    total: Optional[float] = None
    if len(sites) <= get_config().guards.max_product_components:
        total = product_tv(
            [
                (np.array([a, 1 - a]), np.array([b, 1 - b]))
                for a, b in zip(with_field, without)
            ]
        )
    return SublatticeTV(sites=sites, site_tvs=site_tvs, site_lower_bounds=bounds, product_tv=total)
