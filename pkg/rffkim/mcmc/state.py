"""链的计划、模型描述与状态"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Tuple

import numpy as np
from pydantic import BaseModel, Field

from ..core.constants import REGIME_CRIT, check_temperature, p_from_temperature, regime_of_temperature
from ..core.exceptions import InvalidParameterError
from ..disorder.field import DisorderField
from ..lattice.boundary import BoundaryCondition
from ..lattice.graph import LatticeGraph

logger = logging.getLogger(__name__)

MODEL_KINDS = ("rfim", "rffk")


class ChainPlan(BaseModel):
    """马尔可夫链的运行计划"""

    burn_in: int = Field(default=0, ge=0, description="预热扫描数")
    thin: int = Field(default=1, ge=1, description="相邻样本之间的扫描数")
    samples: int = Field(default=0, ge=0, description="每个副本的样本数")
    replicas: int = Field(default=1, ge=1, description="独立副本数")
    seed: int = Field(default=0, ge=0, lt=2**64, description="种子基数")
    stream: int = Field(default=0, ge=0, description="子流编号，副本 r 的随机数由 (seed, stream, r) 派生")

    @property
    def total_sweeps(self) -> int:
        """replicas × (burn_in + thin × samples)"""
        return self.replicas * (self.burn_in + self.thin * self.samples)

    @classmethod
    def with_default_burn_in(cls, N: int, T: float, **kwargs) -> "ChainPlan":
        """预热默认值：T ≠ T_c 时 100·N，T = T_c 时 20·N²"""
        burn_in = 20 * N * N if regime_of_temperature(T) == REGIME_CRIT else 100 * N
        return cls(burn_in=max(burn_in, 1), **kwargs)

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """
    待采样的模型

    Attributes:
        graph: 格点图
        kind: rfim（热浴，自旋）或 rffk（Edwards–Sokal，自旋+边）
        T: 温度，p = 1 − exp(−2/T)
        boundary: rfim 须为 IsingSpin；rffk 可为 FK 边界或 IsingSpin（外部自旋簇被钳制）
        hot_start: 随机自旋初始化
    """

    graph: LatticeGraph
    kind: str
    T: float
    boundary: BoundaryCondition
    hot_start: bool = False

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise InvalidParameterError(f"未知模型: {self.kind}")
        object.__setattr__(self, "T", check_temperature(self.T))
        if self.kind == "rfim" and not self.boundary.is_ising:
            raise InvalidParameterError("rfim 链要求 IsingSpin 边界")

    @property
    def p(self) -> float:
        return p_from_temperature(self.T)

    @cached_property
    def boundary_field(self) -> np.ndarray:
        """各顶点受到的外部自旋场 Σ ξ_v"""
        return self.boundary.boundary_field(self.graph)

    @cached_property
    def color_classes(self) -> Tuple[np.ndarray, np.ndarray]:
        """偶、奇格点编号（各自升序）"""
        parity = self.graph.parity
        return np.flatnonzero(parity == 0), np.flatnonzero(parity == 1)

    @property
    def fk_boundary(self) -> BoundaryCondition:
        """用于簇统计的 FK 边界（Ising 边界按 free）"""
        return self.boundary if self.boundary.is_fk else BoundaryCondition.free()

    def describe(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "T": self.T,
            "n": self.graph.n,
            "graph": self.graph.kind,
            "boundary": self.boundary.label,
            "hot_start": self.hot_start,
        }


def substream(seed: int, *words: int) -> np.random.Generator:
    """由 (seed, words...) 派生的 Philox 生成器"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, words)])))


@dataclass(eq=False)
class ChainState:
    """
    链状态

    Attributes:
        spec: 模型
        field: 外场
        sigma: ±1 自旋（int8）
        omega: 边构型（bool）
        ghost_omega: IsingSpin 边界下与外部自旋相连的边界边
        rng: 本链的随机数子流
        sweep: 已完成的扫描数
    """

    spec: ModelSpec
    field: DisorderField
    sigma: np.ndarray
    omega: np.ndarray
    ghost_omega: np.ndarray
    rng: np.random.Generator
    sweep: int = 0

    @property
    def graph(self) -> LatticeGraph:
        return self.spec.graph

    def magnetization(self) -> float:
        return float(self.sigma.mean())


def initial_state(
    spec: ModelSpec,
    field: DisorderField,
    seed: int,
    replica: int = 0,
    stream: int = 0,
) -> ChainState:
    """全负自旋、全闭边；hot_start 时自旋随机（接线组内统一取组首自旋）"""
    field.check_graph(spec.graph)
    rng = substream(seed, stream, replica, 0)
    graph = spec.graph
    if spec.hot_start:
        sigma = np.where(rng.random(graph.num_vertices) < 0.5, 1, -1).astype(np.int8)
        for group in spec.boundary.wiring_groups(graph) if spec.kind == "rffk" else []:
            sigma[group] = sigma[group[0]]
    else:
        sigma = -np.ones(graph.num_vertices, dtype=np.int8)
    ghost_vertices, _ = spec.boundary.ghost_links(graph)
    return ChainState(
        spec=spec,
        field=field,
        sigma=sigma,
        omega=np.zeros(graph.num_edges, dtype=bool),
        ghost_omega=np.zeros(len(ghost_vertices), dtype=bool),
        rng=rng,
    )
