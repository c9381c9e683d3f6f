"""数值稳定的小函数"""

import math

import numpy as np
from scipy.special import expit

LOG2 = math.log(2.0)


def log_2cosh(x):
    """ln(2cosh x) = |x| + ln(1 + e^{−2|x|})"""
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax))


def log_cosh(x):
    """f(x) = ln cosh x"""
    return log_2cosh(x) - LOG2


def plus_probability(x):
    """e^x / (e^x + e^{−x})，即单点热浴概率 g(x)，也是簇取正号的概率"""
    return expit(2.0 * np.asarray(x, dtype=np.float64))
