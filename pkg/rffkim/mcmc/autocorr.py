"""自相关时间与批均值误差"""

from typing import Tuple

import numpy as np

from ..core.exceptions import InvalidParameterError


def autocorrelation(x: np.ndarray) -> np.ndarray:
    """归一化自相关函数 ρ(t)，用 FFT 计算"""
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    if n < 2:
        return np.ones(1)
    centered = x - x.mean()
    size = 1 << (2 * n - 1).bit_length()
    spectrum = np.fft.rfft(centered, size)
    acf = np.fft.irfft(spectrum * np.conj(spectrum), size)[:n]
    if acf[0] <= 0:
        return np.concatenate([[1.0], np.zeros(n - 1)])
    return acf / acf[0]


def integrated_autocorrelation_time(x: np.ndarray, window_factor: float = 5.0) -> Tuple[float, int]:
    """
    积分自相关时间 τ_int = 1/2 + Σ_{t≥1} ρ(t)

    自洽窗口：取最小的 W 使 W ≥ window_factor · τ_int(W)。

    Returns:
        (τ_int, 窗口 W)；常数序列返回 (0.5, 0)
    """
    rho = autocorrelation(x)
    if len(rho) < 2 or not np.any(rho[1:]):
        return 0.5, 0
    tau = 0.5 + np.cumsum(rho[1:])
    for window in range(1, len(tau) + 1):
        if window >= window_factor * tau[window - 1]:
            return float(max(tau[window - 1], 0.5)), window
    return float(max(tau[-1], 0.5)), len(tau)


def statistical_inefficiency(x: np.ndarray) -> float:
    """g = 2 τ_int ≥ 1"""
    tau, _ = integrated_autocorrelation_time(x)
    return max(1.0, 2.0 * tau)


def batch_means_error(x: np.ndarray, n_batches: int = 10) -> float:
    """批均值法估计样本均值的标准误"""
    if n_batches < 2:
        raise InvalidParameterError("批数至少为 2")
    x = np.asarray(x, dtype=np.float64)
    size = len(x) // n_batches
    if size == 0:
        return float("nan")
    means = x[: size * n_batches].reshape(n_batches, size).mean(axis=1)
    return float(means.std(ddof=1) / np.sqrt(n_batches))
