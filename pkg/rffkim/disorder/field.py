"""随机外场 h 与强度 ε"""

import hashlib
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np
import pandas as pd

from ..core.exceptions import InvalidParameterError, SchemaError
from ..lattice.graph import LatticeGraph
from .prng import GENERATOR_ID, check_seed, site_normals

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["vertex_index", "x", "y", "h_value"]


@dataclass(frozen=True, eq=False)
class DisorderField:
    """
    外场

    Attributes:
        values: 按顶点编号的 h_v（标准正态）
        epsilon: 外场强度 ε ≥ 0
        seed: 生成种子；显式给定数值时为 None
        generator: 发生器标识
    """

    values: np.ndarray
    epsilon: float = 0.0
    seed: Optional[int] = None
    generator: str = GENERATOR_ID

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0):
            raise InvalidParameterError(f"外场强度必须非负: epsilon={self.epsilon}")
        values = np.array(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "epsilon", float(self.epsilon))

    @classmethod
    def from_values(cls, values: Iterable[float], epsilon: float) -> "DisorderField":
        return cls(values=np.asarray(list(values), dtype=np.float64), epsilon=epsilon, generator="explicit")

    @classmethod
    def zero(cls, graph: LatticeGraph) -> "DisorderField":
        """ε = 0 的场"""
        return cls(values=np.zeros(graph.num_vertices), epsilon=0.0, generator="zero")

    @property
    def size(self) -> int:
        return int(len(self.values))

    @property
    def scaled(self) -> np.ndarray:
        """ε·h_v"""
        return self.epsilon * self.values

    def with_epsilon(self, epsilon: float) -> "DisorderField":
        return replace(self, epsilon=epsilon)

    def check_graph(self, graph: LatticeGraph) -> None:
        if self.size != graph.num_vertices:
            raise InvalidParameterError(
                f"外场长度 {self.size} 与顶点数 {graph.num_vertices} 不一致"
            )

    def fingerprint(self) -> str:
        """(h, ε) 的 sha256 前 16 位，用于模型标签"""
        digest = hashlib.sha256(self.values.tobytes())
        digest.update(repr(self.epsilon).encode())
        return digest.hexdigest()[:16]

    def to_csv(self, path: Union[str, Path], graph: LatticeGraph) -> Path:
        """导出为 vertex_index, x, y, h_value"""
        self.check_graph(graph)
        df = pd.DataFrame(
            {
                "vertex_index": np.arange(self.size),
                "x": graph.coords[:, 0],
                "y": graph.coords[:, 1],
                "h_value": self.values,
            }
        )
        path = Path(path)
        df.to_csv(path, index=False, float_format="%.17g")
        return path

    @classmethod
    def from_csv(cls, path: Union[str, Path], epsilon: float, graph: Optional[LatticeGraph] = None) -> "DisorderField":
        """从 CSV 读取；给出 graph 时校验坐标"""
        df = pd.read_csv(path)
        for column in CSV_COLUMNS:
            if column not in df.columns:
                raise SchemaError(f"外场 CSV 缺少列: {column}")
        df = df.sort_values("vertex_index")
        if graph is not None:
            coords = df[["x", "y"]].to_numpy(dtype=np.int64)
            if coords.shape != graph.coords.shape or not np.array_equal(coords, graph.coords):
                raise SchemaError("外场 CSV 的坐标与图不一致")
        return cls(values=df["h_value"].to_numpy(dtype=np.float64), epsilon=epsilon, generator="csv")


def sample_field(graph: LatticeGraph, seed: int, epsilon: float = 0.0, stream: int = 0) -> DisorderField:
    """
    为图的每个顶点生成一个标准正态 h_v

    数值由 (seed, 格点坐标, stream) 唯一决定，子图与母图在公共格点上取值相同。

    Args:
        graph: 格点图
        seed: 64 位种子
        epsilon: 外场强度
        stream: 子流编号

    Returns:
        DisorderField
    """
    seed = check_seed(seed)
    values = site_normals(seed, graph.coords, stream)
    return DisorderField(values=values, epsilon=epsilon, seed=seed)


def field_sum(field: DisorderField, subset: Iterable[int]) -> float:
    """h_A = Σ_{x∈A} h_x"""
    idx = np.fromiter((int(v) for v in subset), dtype=np.int64)
    if idx.size == 0:
        return 0.0
    if idx.min() < 0 or idx.max() >= field.size:
        raise InvalidParameterError("子集包含不存在的顶点")
    return float(field.values[idx].sum())


def epsilon_schedule(N: int, theta: float, alpha: float) -> float:
    """ε = θ·N^{−α}"""
    if N < 1 or theta <= 0 or float(alpha) <= 0:
        raise InvalidParameterError(f"非法的 ε 规划参数: N={N}, theta={theta}, alpha={alpha}")
    return float(theta) * float(N) ** (-float(alpha))
