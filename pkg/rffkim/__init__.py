"""
rffkim - 二维随机场 Ising 与 FK-Ising 模型工具包

精确枚举小格点分布、马尔可夫链采样、簇统计，以及外场引起的全变差相变的
Monte Carlo 估计。
"""

# 配置第三方库的日志级别，减少噪音
from .utils.logging import quiet_third_party
quiet_third_party()

from .version import __version__, __author__, __description__

# 核心组件
from .core.config import GuardLimits, RffkimConfig, get_config, update_config
from .core.constants import P_C, T_C, alpha_of_temperature, beta_of_temperature, regime_of_temperature
from .core.exceptions import RffkimException

# 格点与外场
from .lattice import BoundaryCondition, LatticeGraph, Rectangle, build_annulus, build_box, dual_edge
from .disorder import DisorderField, epsilon_schedule, sample_field

# 精确分布与簇
from .exact import enumerate_model, exact_tv, partition_ratio_exact
from .clusters import crossing_events, decompose, outmost_closed_region, well_connected

# 采样与估计
from .mcmc import ChainPlan, ModelSpec, run_chain
from .estimators import (
    EstimateWithError,
    boundary_influence,
    correlation_length,
    estimate_partition_ratio,
    estimate_tv_rn,
    ldp_tail,
    p_statistics,
)

__all__ = [
    "__version__",
    "__author__",
    "__description__",
    "GuardLimits",
    "RffkimConfig",
    "get_config",
    "update_config",
    "P_C",
    "T_C",
    "alpha_of_temperature",
    "beta_of_temperature",
    "regime_of_temperature",
    "RffkimException",
    "BoundaryCondition",
    "LatticeGraph",
    "Rectangle",
    "build_annulus",
    "build_box",
    "dual_edge",
    "DisorderField",
    "epsilon_schedule",
    "sample_field",
    "enumerate_model",
    "exact_tv",
    "partition_ratio_exact",
    "crossing_events",
    "decompose",
    "outmost_closed_region",
    "well_connected",
    "ChainPlan",
    "ModelSpec",
    "run_chain",
    "EstimateWithError",
    "boundary_influence",
    "correlation_length",
    "estimate_partition_ratio",
    "estimate_tv_rn",
    "ldp_tail",
    "p_statistics",
]
