"""外场与簇的集中性统计 (P0)–(P3)"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from ..core.constants import alpha_of_regime, alpha_of_temperature, beta_of_temperature, check_temperature
from ..core.exceptions import InvalidParameterError
from ..disorder.field import DisorderField
from ..mcmc.runner import Sample
from ..mcmc.state import ModelSpec
from ..utils.numeric import log_cosh
from .base import EstimateWithError
from .tv import log_density_terms

logger = logging.getLogger(__name__)


@dataclass
class PStatistics:
    """
    (P0)–(P3) 的偏差与经验超出频率

    margin 的定义：
      P1: Σ_v f(εh_v/T) − 2ε²N²/T²，阈值 √(ε²N)
      P2/P3: 每个样本的 F(h, ω) − 2ε²N²/T²，阈值 ±εN^{α(T)}
      P0: ⟨Π_v(1 + σ_v tanh(εh_v/T))⟩ − 1，阈值 √(εN^{β(T)})
    """

    T: float
    N: int
    epsilon: float
    alpha: float
    center: float
    p1_margin: float
    p1_threshold: float
    p2_threshold: float
    mean_margin: float
    p2_exceed: float
    p3_exceed: float
    p0_margin: Optional[float] = None
    p0_threshold: Optional[float] = None

    @property
    def p1_holds(self) -> bool:
        return abs(self.p1_margin) <= self.p1_threshold

    @property
    def p0_holds(self) -> Optional[bool]:
        if self.p0_margin is None:
            return None
        return abs(self.p0_margin) <= self.p0_threshold

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["p1_holds"] = self.p1_holds
        out["p0_holds"] = self.p0_holds
        return out


def _f_values(samples, field: DisorderField, spec: Optional[ModelSpec]) -> np.ndarray:
    if isinstance(samples, np.ndarray):
        return samples.astype(np.float64)
    samples = list(samples)
    if samples and isinstance(samples[0], Sample):
        if spec is None:
            raise InvalidParameterError("由样本计算 F(h, ω) 需要提供模型")
        if not (spec.kind == "rffk" and spec.boundary.is_fk):
            raise InvalidParameterError("F(h, ω) 需要 FK 边界的 rffk 模型")
        return log_density_terms(samples, field, spec)
    return np.asarray(samples, dtype=np.float64)


def p0_margin(field: DisorderField, T: float, z_value: float) -> float:
    """⟨Π(1 + σ tanh(εh/T))⟩ − 1 = (1/Z(h)) / Π cosh(εh/T) − 1"""
    log_prod_cosh = float(np.sum(log_cosh(field.scaled / T)))
    return math.exp(-math.log(z_value) - log_prod_cosh) - 1.0


def p_statistics(
    field: DisorderField,
    samples: Union[Sequence[Sample], Sequence[float], np.ndarray],
    regime: Optional[str] = None,
    *,
    spec: Optional[ModelSpec] = None,
    T: Optional[float] = None,
    N: Optional[int] = None,
    weights: Optional[np.ndarray] = None,
    z_estimate: Optional[EstimateWithError] = None,
) -> PStatistics:
    """
    计算 (P0)–(P3) 统计量

    Args:
        field: 外场
        samples: 无外场 FK 样本，或已算好的 F(h, ω) 值
        regime: low / crit / high，缺省时由 T 判定
        spec: 模型（samples 为 Sample 时必需，并提供 T 与 N）
        T, N: 温度与盒子参数（无 spec 时必需）
        weights: 样本权重（精确表的概率），缺省为等权
        z_estimate: Z(h) 估计，给出时计算 (P0)

    Returns:
        PStatistics
    """
    if spec is not None:
        T = spec.T if T is None else T
        N = spec.graph.n if N is None else N
    if T is None or N is None:
        raise InvalidParameterError("需要 T 与 N")
    T = check_temperature(T)
    eps = field.epsilon
    alpha = float(alpha_of_regime(regime)) if regime else float(alpha_of_temperature(T))
    center = 2.0 * eps**2 * N**2 / T**2

    f = _f_values(samples, field, spec)
    if weights is None:
        w = np.full(len(f), 1.0 / len(f)) if len(f) else np.zeros(0)
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != f.shape:
            raise InvalidParameterError("权重与样本数不一致")
        w = w / w.sum()
    margins = f - center
    threshold = eps * N**alpha

    p1 = float(np.sum(log_cosh(field.scaled / T))) - center
    stats = PStatistics(
        T=T,
        N=int(N),
        epsilon=eps,
        alpha=alpha,
        center=center,
        p1_margin=p1,
        p1_threshold=math.sqrt(eps**2 * N),
        p2_threshold=threshold,
        mean_margin=float(np.dot(w, margins)) if len(f) else 0.0,
        p2_exceed=float(np.dot(w, margins > threshold)) if len(f) else 0.0,
        p3_exceed=float(np.dot(w, margins < -threshold)) if len(f) else 0.0,
    )
    if z_estimate is not None:
        stats.p0_margin = p0_margin(field, T, z_estimate.value)
        stats.p0_threshold = math.sqrt(eps * N ** float(beta_of_temperature(T)))
    return stats
