"""模型常数与温度-参数换算"""

import math
from fractions import Fraction

from .exceptions import InvalidParameterError

# p_c = √2/(1+√2) = 2 − √2
P_C: float = 2.0 - math.sqrt(2.0)
# T_c = 2/ln(1+√2)，由 p = 1 − exp(−2/T) 推出
T_C: float = 2.0 / math.log(1.0 + math.sqrt(2.0))

REGIME_RTOL: float = 1e-12

REGIME_LOW = "low"
REGIME_CRIT = "crit"
REGIME_HIGH = "high"
REGIMES = (REGIME_LOW, REGIME_CRIT, REGIME_HIGH)

_ALPHA = {REGIME_LOW: Fraction(1), REGIME_CRIT: Fraction(15, 16), REGIME_HIGH: Fraction(1, 2)}
_BETA = {REGIME_LOW: Fraction(1), REGIME_CRIT: Fraction(7, 8), REGIME_HIGH: Fraction(1, 2)}


def check_temperature(T: float) -> float:
    """校验温度为正的有限实数"""
    if not (isinstance(T, (int, float)) and math.isfinite(T) and T > 0):
        raise InvalidParameterError(f"温度必须为正数: T={T}")
    return float(T)


def check_p(p: float) -> float:
    """校验 p ∈ (0,1)，退化端点直接拒绝"""
    if not (isinstance(p, (int, float)) and 0.0 < p < 1.0):
        raise InvalidParameterError(f"边参数必须满足 0 < p < 1: p={p}")
    return float(p)


def p_from_temperature(T: float) -> float:
    """p = 1 − exp(−2/T)"""
    T = check_temperature(T)
    return -math.expm1(-2.0 / T)


def temperature_from_p(p: float) -> float:
    """T = −2/ln(1−p)"""
    p = check_p(p)
    return -2.0 / math.log1p(-p)


def regime_of_temperature(T: float) -> str:
    """
    按温度划分区间

    Args:
        T: 温度

    Returns:
        "low" / "crit" / "high"，T_c 附近使用相对容差 1e-12
    """
    T = check_temperature(T)
    if abs(T - T_C) <= REGIME_RTOL * T_C:
        return REGIME_CRIT
    return REGIME_LOW if T < T_C else REGIME_HIGH


def alpha_of_temperature(T: float) -> Fraction:
    """α(T)：低温 1，临界 15/16，高温 1/2"""
    return _ALPHA[regime_of_temperature(T)]


def beta_of_temperature(T: float) -> Fraction:
    """β(T)：低温 1，临界 7/8，高温 1/2"""
    return _BETA[regime_of_temperature(T)]


def alpha_of_regime(regime: str) -> Fraction:
    if regime not in _ALPHA:
        raise InvalidParameterError(f"未知温区: {regime}")
    return _ALPHA[regime]


def temperature_of_regime(regime: str, offset: float = 0.5) -> float:
    """温区的代表温度：T_c 或 T_c ∓ offset"""
    if regime == REGIME_CRIT:
        return T_C
    if regime == REGIME_LOW:
        return T_C - offset
    if regime == REGIME_HIGH:
        return T_C + offset
    raise InvalidParameterError(f"未知温区: {regime}")
