"""估计量的公共数据类型与误差工具"""

import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

from ..core.exceptions import InvalidParameterError


class EstimateWithError(BaseModel):
    """
    带标准误的 Monte Carlo 估计

    Attributes:
        value: 点估计
        stderr: 标准误
        replicas: 参与估计的副本数
        method: 方法标签
        diagnostics: 诊断信息（有效样本量、桥接重叠度等）
    """

    value: float
    stderr: float = Field(default=0.0, ge=0.0)
    replicas: int = Field(default=0, ge=0)
    method: str = ""
    diagnostics: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("value")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError(f"估计值不是有限数: {v}")
        return v

    def interval(self, k: float = 3.0) -> Tuple[float, float]:
        return self.value - k * self.stderr, self.value + k * self.stderr

    def agrees_with(self, target: float, k: float = 3.0, floor: float = 0.0) -> bool:
        """|value − target| ≤ k·stderr + floor"""
        return abs(self.value - target) <= k * self.stderr + floor

    @property
    def unreliable(self) -> bool:
        return bool(self.diagnostics.get("unreliable", False))

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()


class RegimeReport(BaseModel):
    """单个 (T, N, ε) 点的汇总"""

    T: float
    N: int
    epsilon: float
    alpha: float
    tv: EstimateWithError
    z: EstimateWithError
    p2_margin: float = 0.0
    p3_margin: float = 0.0
    p2_exceed: float = 0.0
    p3_exceed: float = 0.0
    diagnostics: Dict[str, Any] = Field(default_factory=dict)

    def to_row(self) -> Dict[str, Any]:
        return {
            "T": self.T,
            "N": self.N,
            "epsilon": self.epsilon,
            "alpha": self.alpha,
            "tv_mean": self.tv.value,
            "tv_se": self.tv.stderr,
            "z_hat": self.z.value,
            "z_se": self.z.stderr,
            "p2_exceed": self.p2_exceed,
            "p3_exceed": self.p3_exceed,
        }


def jackknife(groups: Sequence[np.ndarray], statistic=np.mean) -> Tuple[float, float]:
    """
    按组删一的 jackknife

    Args:
        groups: 每组（副本）的样本值
        statistic: 作用于合并样本的统计量

    Returns:
        (全样本统计量, jackknife 标准误)
    """
    groups = [np.asarray(g, dtype=np.float64) for g in groups if len(g)]
    if not groups:
        raise InvalidParameterError("jackknife 需要至少一组非空样本")
    full = float(statistic(np.concatenate(groups)))
    R = len(groups)
    if R < 2:
        return full, float("nan")
    loo = np.array(
        [statistic(np.concatenate(groups[:r] + groups[r + 1:])) for r in range(R)],
        dtype=np.float64,
    )
    se = math.sqrt((R - 1) / R * float(np.sum((loo - loo.mean()) ** 2)))
    return full, se


def split_batches(values: np.ndarray, n_batches: int = 10) -> List[np.ndarray]:
    """把单副本样本切成 n_batches 段，供 jackknife 使用"""
    values = np.asarray(values, dtype=np.float64)
    size = len(values) // n_batches
    if size == 0:
        return [values]
    return [values[i * size:(i + 1) * size] for i in range(n_batches)]


def grouped_jackknife(values: np.ndarray, groups: np.ndarray, n_batches: int = 10) -> Tuple[float, float]:
    """多副本时按副本删一，单副本时按批删一"""
    values = np.asarray(values, dtype=np.float64)
    groups = np.asarray(groups)
    labels = np.unique(groups)
    if len(labels) > 1:
        parts = [values[groups == g] for g in labels]
    else:
        parts = split_batches(values, n_batches)
    mean, se = jackknife(parts)
    if not math.isfinite(se):
        se = 0.0
    return mean, se


def summarize(values: Sequence[float], method: str = "disorder-mean", diagnostics: Optional[Dict[str, Any]] = None) -> EstimateWithError:
    """独立重复（如无序样本）的均值与标准误"""
    arr = np.asarray(values, dtype=np.float64)
    if len(arr) == 0:
        raise InvalidParameterError("没有可汇总的值")
    se = float(arr.std(ddof=1) / math.sqrt(len(arr))) if len(arr) > 1 else 0.0
    return EstimateWithError(
        value=float(arr.mean()),
        stderr=se,
        replicas=len(arr),
        method=method,
        diagnostics=diagnostics or {},
    )
