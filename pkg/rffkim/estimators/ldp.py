"""
无外场 FK 测度下最大簇的尾部测量

p = p_c：max|C| / N^{15/8} 与 M(ω) / N^{15/4}，M(ω) = Σ|C|²
p < p_c：Σ|C|² / N² 与 max|C|
p > p_c：第二大簇、边界簇是否为最大簇、两独立样本边界簇的差集大小
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..clusters.decomposition import decompose
from ..core.config import GuardLimits
from ..core.constants import P_C, check_p, temperature_from_p
from ..disorder.field import DisorderField
from ..lattice.boundary import BoundaryCondition
from ..lattice.graph import build_box
from ..mcmc.runner import Sample, collect_samples
from ..mcmc.state import ChainPlan, ModelSpec

logger = logging.getLogger(__name__)

MAX_EXPONENT = 15.0 / 8.0
SUM_SQ_EXPONENT = 15.0 / 4.0


def p_regime(p: float, tol: float = 1e-12) -> str:
    """sub / crit / super"""
    if abs(p - P_C) <= tol * P_C:
        return "crit"
    return "sub" if p < P_C else "super"


@dataclass
class TailTable:
    """
    尾部测量结果

    Attributes:
        p: 边参数
        regime: sub / crit / super
        rows: 每个样本一行
        summary: 每个 N 一行的汇总
    """

    p: float
    regime: str
    rows: pd.DataFrame
    summary: pd.DataFrame

    def column(self, N: int, name: str) -> np.ndarray:
        return self.rows.loc[self.rows["N"] == N, name].to_numpy()


def tail_frequencies(values: Sequence[float], thresholds: Sequence[float]) -> np.ndarray:
    """经验频率 P(value ≥ t)，对每个阈值"""
    values = np.asarray(values, dtype=np.float64)
    if len(values) == 0:
        return np.zeros(len(thresholds))
    return np.array([float(np.mean(values >= t)) for t in thresholds])


def boundary_overlap_deficit(a: Sample, b: Sample, graph, gamma: BoundaryCondition) -> int:
    """|C*| − |C* ∩ C̃*|，C*、C̃* 为两个样本的边界簇"""
    da = decompose(a.omega, graph, gamma)
    db = decompose(b.omega, graph, gamma)
    if da.boundary_label is None or db.boundary_label is None:
        return 0
    ca = da.labels == da.boundary_label
    cb = db.labels == db.boundary_label
    return int(ca.sum() - (ca & cb).sum())


def _rows_for_n(N: int, samples: List[Sample], graph, gamma: BoundaryCondition) -> List[Dict]:
    rows = []
    for s in samples:
        st = s.stats
        rows.append(
            {
                "N": N,
                "replica": s.replica,
                "sweep": s.sweep,
                "max_size": st.max_size,
                "second_size": st.second_size,
                "sum_sq": st.sum_sq,
                "kappa": st.kappa,
                "max_scaled": st.max_size / N**MAX_EXPONENT,
                "sum_sq_scaled": st.sum_sq / N**SUM_SQ_EXPONENT,
                "sum_sq_over_n2": st.sum_sq / N**2,
                "boundary_size": st.boundary_size,
                "boundary_is_maximal": st.boundary_is_maximal,
            }
        )
    # 不同副本之间的样本独立，按样本序号配对
    by_replica: Dict[int, List[Sample]] = {}
    for s in samples:
        by_replica.setdefault(s.replica, []).append(s)
    replicas = sorted(by_replica)
    deficits: Dict[int, Optional[int]] = {}
    for r, nxt in zip(replicas, replicas[1:]):
        for a, b in zip(by_replica[r], by_replica[nxt]):
            deficits[id(a)] = boundary_overlap_deficit(a, b, graph, gamma)
    for row, s in zip(rows, samples):
        row["overlap_deficit"] = deficits.get(id(s), np.nan)
    return rows


def ldp_tail(
    p: float,
    n_list: Sequence[int],
    replicas: int,
    *,
    samples_per_replica: int = 1,
    thin: int = 1,
    burn_in: Optional[int] = None,
    boundary: str = "wired",
    seed: int = 0,
    guards: Optional[GuardLimits] = None,
    threads: Optional[int] = None,
) -> TailTable:
    """
    在 φ^{γ,0}_p 下采样并整理簇尺度统计

    Args:
        p: 边参数
        n_list: 盒子参数列表
        replicas: 每个 N 的独立副本数
        samples_per_replica: 每个副本的样本数
        thin: 样本间隔
        burn_in: 预热；缺省时 T = T_c 取 20·N²，否则 100·N
        boundary: wired / free
        seed: 种子基数

    Returns:
        TailTable
    """
    p = check_p(p)
    T = temperature_from_p(p)
    regime = p_regime(p)
    all_rows: List[Dict] = []
    for N in n_list:
        graph = build_box(N)
        gamma = BoundaryCondition.from_name(boundary, graph)
        spec = ModelSpec(graph=graph, kind="rffk", T=T, boundary=gamma)
        if burn_in is None:
            plan = ChainPlan.with_default_burn_in(
                max(N, 1), T, thin=thin, samples=samples_per_replica, replicas=replicas, seed=seed
            )
        else:
            plan = ChainPlan(burn_in=burn_in, thin=thin, samples=samples_per_replica, replicas=replicas, seed=seed)
        samples = collect_samples(plan, spec, DisorderField.zero(graph), guards, threads)
        all_rows.extend(_rows_for_n(N, samples, graph, gamma))
        logger.info("✅ ldp 采样完成: p=%.6g, N=%d, %d 个样本", p, N, len(samples))

    rows = pd.DataFrame(all_rows)
    if rows.empty:
        summary = pd.DataFrame()
    else:
        grouped = rows.groupby("N")
        summary = pd.DataFrame(
            {
                "median_max_scaled": grouped["max_scaled"].median(),
                "median_sum_sq_scaled": grouped["sum_sq_scaled"].median(),
                "mean_sum_sq_over_n2": grouped["sum_sq_over_n2"].mean(),
                "mean_max_size": grouped["max_size"].mean(),
                "mean_second_size": grouped["second_size"].mean(),
                "boundary_is_maximal_freq": grouped["boundary_is_maximal"].mean(),
                "mean_overlap_deficit": grouped["overlap_deficit"].mean(),
                "samples": grouped.size(),
            }
        ).reset_index()
    return TailTable(p=p, regime=regime, rows=rows, summary=summary)
