"""
运行马尔可夫链并产出样本流

副本 r 的随机数子流由 (seed, stream, r) 派生，样本流只取决于 (plan, spec, field)，
与线程数无关。
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..clusters.decomposition import ClusterStats, cluster_stats, decompose
from ..core.config import GuardLimits, get_config
from ..disorder.field import DisorderField
from ..utils.executor import parallel_map
from .edwards_sokal import es_sweep, sample_edges_given_spins
from .heatbath import heatbath_sweep
from .state import ChainPlan, ChainState, ModelSpec, initial_state, substream

logger = logging.getLogger(__name__)

# 对 rfim 样本抽取 ES 边时使用的子流标记，与链本身的子流分开
MEASURE_STREAM = 1

# 样本 CSV 的列；前九列为固定接口，其余为附加诊断量
SAMPLE_RENAMES = {"max_size": "max_cluster", "boundary_size": "boundary_cluster"}
SAMPLE_COLUMNS = [
    "replica", "sweep", "kappa", "max_cluster", "sum_sq", "sum_quartic", "boundary_cluster", "F_value", "magnetization",
    "second_size", "boundary_is_maximal", "field_sq_term", "field_quartic_term",
]


@dataclass
class Sample:
    """
    一个样本

    Attributes:
        replica: 副本编号
        sweep: 采样时已完成的扫描数
        sigma: 自旋构型
        omega: 边构型（rfim 链为按 σ 抽取的 ES 边）
        stats: ω 的簇统计量
        magnetization: 平均磁化
    """

    replica: int
    sweep: int
    sigma: np.ndarray
    omega: np.ndarray
    stats: ClusterStats
    magnetization: float

    def to_row(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {"replica": self.replica, "sweep": self.sweep, "magnetization": self.magnetization}
        row.update(self.stats.to_dict())
        return row


def sweep_once(state: ChainState) -> ChainState:
    """按模型选择热浴或 ES 扫描"""
    if state.spec.kind == "rfim":
        return heatbath_sweep(state)
    return es_sweep(state)


def _measure(state: ChainState, replica: int, measure_rng: Optional[np.random.Generator]) -> Sample:
    spec = state.spec
    if spec.kind == "rfim":
        omega, _ = sample_edges_given_spins(state.sigma, spec, measure_rng)
    else:
        omega = state.omega.copy()
    decomp = decompose(omega, spec.graph, spec.fk_boundary)
    return Sample(
        replica=replica,
        sweep=state.sweep,
        sigma=state.sigma.copy(),
        omega=omega,
        stats=cluster_stats(decomp, state.field, spec.T),
        magnetization=state.magnetization(),
    )


def run_replica(
    plan: ChainPlan,
    spec: ModelSpec,
    field: DisorderField,
    replica: int,
    progress: bool = False,
) -> Iterator[Sample]:
    """单个副本：预热 burn_in 次，之后每 thin 次扫描产出一个样本"""
    state = initial_state(spec, field, plan.seed, replica, plan.stream)
    measure_rng = substream(plan.seed, plan.stream, replica, MEASURE_STREAM) if spec.kind == "rfim" else None
    total = plan.burn_in + plan.thin * plan.samples
    with tqdm(total=total, disable=not progress, desc=f"replica {replica}", leave=False) as bar:
        for _ in range(plan.burn_in):
            sweep_once(state)
            bar.update(1)
        for _ in range(plan.samples):
            for _ in range(plan.thin):
                sweep_once(state)
                bar.update(1)
            yield _measure(state, replica, measure_rng)


def run_chain(
    plan: ChainPlan,
    spec: ModelSpec,
    field: DisorderField,
    guards: Optional[GuardLimits] = None,
    progress: bool = False,
) -> Iterator[Sample]:
    """
    依次运行所有副本的样本流

    Args:
        plan: 运行计划
        spec: 模型
        field: 外场
        guards: 资源限制，默认取全局配置
        progress: 是否显示进度条

    Raises:
        GuardException: 总扫描数超出 max_total_sweeps
    """
    guards = guards or get_config().guards
    guards.check_sweeps(plan.total_sweeps)
    field.check_graph(spec.graph)
    logger.info(
        "▶️ 运行 %s 链：n=%d, T=%.6g, 边界=%s, %d 副本 × (%d + %d × %d) 次扫描",
        spec.kind, spec.graph.n, spec.T, spec.boundary.label,
        plan.replicas, plan.burn_in, plan.thin, plan.samples,
    )
    for replica in range(plan.replicas):
        yield from run_replica(plan, spec, field, replica, progress)


def collect_samples(
    plan: ChainPlan,
    spec: ModelSpec,
    field: DisorderField,
    guards: Optional[GuardLimits] = None,
    threads: Optional[int] = None,
) -> List[Sample]:
    """并行运行各副本，结果按 (副本, 扫描) 排序，与 run_chain 的输出相同"""
    guards = guards or get_config().guards
    guards.check_sweeps(plan.total_sweeps)
    field.check_graph(spec.graph)
    per_replica = parallel_map(
        lambda r: list(run_replica(plan, spec, field, r)),
        range(plan.replicas),
        max_workers=threads,
    )
    return [sample for samples in per_replica for sample in samples]


def samples_frame(samples: List[Sample]) -> pd.DataFrame:
    """样本统计量表，列顺序固定为 SAMPLE_COLUMNS"""
    frame = pd.DataFrame([s.to_row() for s in samples]).rename(columns=SAMPLE_RENAMES)
    return frame.reindex(columns=SAMPLE_COLUMNS)
