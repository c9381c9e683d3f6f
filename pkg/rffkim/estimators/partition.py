"""
配分函数比 Z(h) = Z^{0} / Z^{εh} 的 Monte Carlo 估计

记 W(σ) = Σ_v ε h_v σ_v / T：
  正向  1/Z(h) = ⟨e^{W}⟩_0        （无外场链）
  反向  Z(h)   = ⟨e^{−W}⟩_{εh}    （有外场链）
  桥接  Bennett 接受率方程，由 brentq 求根
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit, logsumexp

from ..core.config import GuardLimits, get_config
from ..disorder.field import DisorderField
from ..mcmc.autocorr import statistical_inefficiency
from ..mcmc.runner import Sample, collect_samples
from ..mcmc.state import ChainPlan, ModelSpec
from .base import EstimateWithError

logger = logging.getLogger(__name__)

OVERLAP_THRESHOLD = 0.03
# 有外场链使用的子流
FIELD_STREAM = 1


@dataclass
class SamplePair:
    """无外场与有外场两条链的样本"""

    without_field: List[Sample]
    with_field: List[Sample]


def field_energy(samples: List[Sample], field: DisorderField, T: float) -> np.ndarray:
    """每个样本的 W = Σ ε h σ / T"""
    if not samples:
        return np.zeros(0)
    sigmas = np.stack([s.sigma for s in samples]).astype(np.float64)
    return sigmas @ field.scaled / T


def _inefficiency(samples: List[Sample], values: np.ndarray) -> float:
    """各副本统计无效率的平均"""
    replicas = np.array([s.replica for s in samples])
    gs = [statistical_inefficiency(values[replicas == r]) for r in np.unique(replicas)]
    return float(np.mean(gs)) if gs else 1.0


def sample_pair(
    field: DisorderField,
    spec: ModelSpec,
    plan: ChainPlan,
    guards: Optional[GuardLimits] = None,
    threads: Optional[int] = None,
) -> SamplePair:
    """运行无外场链（plan.stream）与有外场链（子流 FIELD_STREAM）"""
    guards = guards or get_config().guards
    guards.check_sweeps(2 * plan.total_sweeps)
    without = collect_samples(plan, spec, field.with_epsilon(0.0), guards, threads)
    field_plan = plan.model_copy(update={"stream": plan.stream + FIELD_STREAM})
    with_field = collect_samples(field_plan, spec, field, guards, threads)
    return SamplePair(without_field=without, with_field=with_field)


def _log_mean_exp(x: np.ndarray) -> float:
    return float(logsumexp(x) - math.log(len(x)))


def _log_se(x: np.ndarray, g: float) -> float:
    """ln⟨e^x⟩ 的 delta 方法标准误"""
    if len(x) < 2:
        return 0.0
    w = np.exp(x - x.max())
    m = w.mean()
    return math.sqrt(max(w.var(ddof=1), 0.0) * g / len(x)) / m


def bar_free_energy(w_F: np.ndarray, w_R: np.ndarray) -> float:
    """
    Bennett 接受率方程的根 ΔF

    Args:
        w_F: 正向约化功（状态 0 的样本上 u1 − u0）
        w_R: 反向约化功（状态 1 的样本上 u0 − u1）
    """
    M = math.log(len(w_F) / len(w_R))

    def balance(df: float) -> float:
        fwd = expit(-(M + w_F - df)).sum()
        rev = expit(-(-M + w_R + df)).sum()
        return float(fwd - rev)

    guess = 0.5 * (-_log_mean_exp(-w_F) + _log_mean_exp(-w_R))
    lo, hi = guess - 1.0, guess + 1.0
    for _ in range(200):
        if balance(lo) < 0 < balance(hi):
            break
        lo, hi = lo - (hi - lo), hi + (hi - lo)
    return float(brentq(balance, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps))


def bar_variance(w_F: np.ndarray, w_R: np.ndarray, df: float, g_F: float = 1.0, g_R: float = 1.0) -> float:
    """ΔF 的渐近方差，各侧乘以统计无效率"""
    M = math.log(len(w_F) / len(w_R))
    f_F = expit(-(M + w_F - df))
    f_R = expit(-(-M + w_R + df))
    var = 0.0
    for f, g in ((f_F, g_F), (f_R, g_R)):
        mean = f.mean()
        if mean > 0:
            var += g * (np.mean(f**2) / mean**2 - 1.0) / len(f)
    return max(var, 0.0)


def bridge_overlap(w_F: np.ndarray, w_R: np.ndarray, df: float) -> float:
    """√(acc_F · acc_R)，acc 为 Metropolis 接受率的样本均值"""
    acc_F = np.minimum(1.0, np.exp(-(w_F - df))).mean()
    acc_R = np.minimum(1.0, np.exp(-(w_R + df))).mean()
    return float(math.sqrt(acc_F * acc_R))


def partition_ratio_from_samples(field: DisorderField, spec: ModelSpec, pair: SamplePair) -> EstimateWithError:
    """由两条链的样本给出 Z(h) 的正向、反向与桥接估计"""
    if field.epsilon == 0.0:
        return EstimateWithError(value=1.0, stderr=0.0, replicas=0, method="trivial")
    W_F = field_energy(pair.without_field, field, spec.T)
    W_R = field_energy(pair.with_field, field, spec.T)
    replicas = len({s.replica for s in pair.without_field})
    diagnostics = {"n_forward": int(len(W_F)), "n_reverse": int(len(W_R))}

    g_F = _inefficiency(pair.without_field, W_F) if len(W_F) else 1.0
    g_R = _inefficiency(pair.with_field, W_R) if len(W_R) else 1.0

    if len(W_F) == 0 and len(W_R) == 0:
        return EstimateWithError(value=1.0, stderr=0.0, replicas=0, method="empty", diagnostics={"unreliable": True})
    if len(W_R) == 0:
        log_z = -_log_mean_exp(W_F)
        log_se = _log_se(W_F, g_F)
        method = "forward"
    elif len(W_F) == 0:
        log_z = _log_mean_exp(-W_R)
        log_se = _log_se(-W_R, g_R)
        method = "reverse"
    else:
        forward = -_log_mean_exp(W_F)
        reverse = _log_mean_exp(-W_R)
        log_z = bar_free_energy(-W_F, W_R)
        log_se = math.sqrt(bar_variance(-W_F, W_R, log_z, g_F, g_R))
        overlap = bridge_overlap(-W_F, W_R, log_z)
        method = "bar"
        diagnostics.update(
            forward=math.exp(forward),
            forward_se=math.exp(forward) * _log_se(W_F, g_F),
            reverse=math.exp(reverse),
            reverse_se=math.exp(reverse) * _log_se(-W_R, g_R),
            overlap=overlap,
            unreliable=overlap < OVERLAP_THRESHOLD,
        )
        if overlap < OVERLAP_THRESHOLD:
            logger.warning("⚠️ 桥接重叠度 %.3g 低于阈值 %.2g，Z(h) 估计不可靠", overlap, OVERLAP_THRESHOLD)

    diagnostics.update(
        log_value=log_z,
        log_se=log_se,
        inefficiency_forward=g_F,
        inefficiency_reverse=g_R,
        ess=float(len(W_F) / g_F + len(W_R) / g_R),
    )
    value = math.exp(log_z)
    return EstimateWithError(
        value=value,
        stderr=value * log_se,
        replicas=replicas,
        method=method,
        diagnostics=diagnostics,
    )


def estimate_partition_ratio(
    field: DisorderField,
    spec: ModelSpec,
    plan: ChainPlan,
    guards: Optional[GuardLimits] = None,
    threads: Optional[int] = None,
) -> EstimateWithError:
    """
    估计 Z(h)

    ε = 0 时直接返回 1（零方差），否则运行两条链并做桥接。

    Args:
        field: 外场
        spec: 模型（rfim 为 Ising 配分函数比，rffk 为 FK 配分函数比）
        plan: 运行计划

    Returns:
        EstimateWithError，diagnostics 含 forward / reverse / overlap / unreliable
    """
    if field.epsilon == 0.0:
        return EstimateWithError(value=1.0, stderr=0.0, replicas=0, method="trivial")
    pair = sample_pair(field, spec, plan, guards, threads)
    return partition_ratio_from_samples(field, spec, pair)


def reciprocity(estimate: EstimateWithError) -> Tuple[float, float]:
    """正向（1/Z）与反向（Z）估计之积及其合成标准误"""
    d = estimate.diagnostics
    if "forward" not in d:
        return 1.0, 0.0
    product = d["reverse"] / d["forward"]
    rel = math.hypot(d["forward_se"] / d["forward"], d["reverse_se"] / d["reverse"])
    return product, product * rel
