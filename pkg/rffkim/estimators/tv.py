"""
全变差的 Radon–Nikodym 估计

d_TV(ν^{εh}, ν) = E_ν (1 − G)₊，其中
  FK（边构型）：G = Z(h)·exp(F(h, ω))
  Ising（自旋构型）：G = Z(h)·exp(Σ ε h σ / T)
ν 为无外场测度，样本取自无外场链。
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..clusters.decomposition import decompose, f_functional
from ..core.config import GuardLimits
from ..core.exceptions import InvalidParameterError, PreconditionError
from ..disorder.field import DisorderField
from ..mcmc.runner import Sample, collect_samples
from ..mcmc.state import ChainPlan, ModelSpec
from .base import EstimateWithError, grouped_jackknife
from .partition import field_energy, partition_ratio_from_samples, sample_pair

logger = logging.getLogger(__name__)


def uses_edge_space(spec: ModelSpec) -> bool:
    """rffk 且为 FK 边界时在边构型空间上比较，否则在自旋空间上比较"""
    return spec.kind == "rffk" and spec.boundary.is_fk


def log_density_terms(samples: List[Sample], field: DisorderField, spec: ModelSpec) -> np.ndarray:
    """每个样本的 ln G − ln Z(h)，即 F(h, ω) 或 W(σ)"""
    if uses_edge_space(spec):
        return np.array(
            [f_functional(decompose(s.omega, spec.graph, spec.boundary), field, spec.T) for s in samples],
            dtype=np.float64,
        )
    return field_energy(samples, field, spec.T)


def estimate_tv_rn(
    field: DisorderField,
    spec: ModelSpec,
    plan: ChainPlan,
    z_estimate: Optional[EstimateWithError] = None,
    samples: Optional[List[Sample]] = None,
    guards: Optional[GuardLimits] = None,
    threads: Optional[int] = None,
) -> EstimateWithError:
    """
    用 Z(h) 估计值代入 (1 − Ẑ e^{F})₊ 的样本均值

    Args:
        field: 外场
        spec: 模型
        plan: 运行计划（samples 未给出时用于运行无外场链）
        z_estimate: Z(h) 的估计
        samples: 无外场链的样本

    Returns:
        EstimateWithError；stderr 合成了 jackknife 误差与 Ẑ 误差的 delta 方法传播项

    Raises:
        PreconditionError: 缺少 Z(h) 估计
    """
    if field.epsilon == 0.0:
        return EstimateWithError(value=0.0, stderr=0.0, replicas=0, method="trivial")
    if z_estimate is None:
        raise PreconditionError("估计全变差需要先给出 Z(h) 的估计")
    if z_estimate.value <= 0:
        raise InvalidParameterError(f"Z(h) 估计必须为正: {z_estimate.value}")
    if samples is None:
        samples = collect_samples(plan, spec, field.with_epsilon(0.0), guards, threads)
    if not samples:
        raise PreconditionError("无外场链没有样本")

    log_terms = log_density_terms(samples, field, spec)
    g = z_estimate.value * np.exp(log_terms)
    values = np.maximum(1.0 - g, 0.0)
    replicas = np.array([s.replica for s in samples])
    mean, jack_se = grouped_jackknife(values, replicas)

    # dTV/dẐ = −E[e^{F} 1{G < 1}]
    sensitivity = -float(np.mean(np.exp(log_terms) * (g < 1.0)))
    z_part = abs(sensitivity) * z_estimate.stderr
    clamped = min(max(mean, 0.0), 1.0)
    diagnostics = {
        "jackknife_se": jack_se,
        "z_sensitivity": sensitivity,
        "z_propagated_se": z_part,
        "plugin_bias_scale": z_part,
        "clamped": clamped != mean,
        "space": "edge" if uses_edge_space(spec) else "spin",
        "unreliable": z_estimate.unreliable,
        "n_samples": len(values),
    }
    return EstimateWithError(
        value=clamped,
        stderr=math.hypot(jack_se, z_part),
        replicas=int(len(np.unique(replicas))),
        method="radon-nikodym",
        diagnostics=diagnostics,
    )


def estimate_tv(
    field: DisorderField,
    spec: ModelSpec,
    plan: ChainPlan,
    guards: Optional[GuardLimits] = None,
    threads: Optional[int] = None,
):
    """
    先估计 Z(h)，再用同一批无外场样本估计全变差

    Returns:
        (全变差估计, Z(h) 估计)
    """
    if field.epsilon == 0.0:
        trivial = EstimateWithError(value=1.0, stderr=0.0, replicas=0, method="trivial")
        return estimate_tv_rn(field, spec, plan, trivial), trivial
    pair = sample_pair(field, spec, plan, guards, threads)
    z = partition_ratio_from_samples(field, spec, pair)
    tv = estimate_tv_rn(field, spec, plan, z, samples=pair.without_field)
    return tv, z


@dataclass
class DecouplingBound:
    """Q(‖ν^η − ν‖ ≥ b) ≤ Q⊗ν(G < 1 − a) / (b − a)"""

    a: float
    b: float
    event_probability: float
    probability_bound: float
    per_field_tv_bounds: np.ndarray


def decoupling_bound(g_values, a: float, b: float) -> DecouplingBound:
    """
    由 (无序样本 × 构型样本) 的 G 表给出的经验界

    Args:
        g_values: 形如 (无序数, 样本数) 的 G 值
        a, b: 0 < a < b < 1

    Returns:
        DecouplingBound；per_field_tv_bounds 为每个外场的 a + ν(G < 1 − a)
    """
    if not 0.0 < a < b < 1.0:
        raise InvalidParameterError(f"要求 0 < a < b < 1: a={a}, b={b}")
    g = np.atleast_2d(np.asarray(g_values, dtype=np.float64))
    low = g < 1.0 - a
    event = float(low.mean())
    return DecouplingBound(
        a=a,
        b=b,
        event_probability=event,
        probability_bound=min(1.0, event / (b - a)),
        per_field_tv_bounds=np.minimum(1.0, a + low.mean(axis=1)),
    )
