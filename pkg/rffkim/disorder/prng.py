"""
Philox4x32-10 计数器型随机数发生器（numpy 向量化）

密钥为 64 位种子的低/高 32 位，计数器为 (zigzag(x), zigzag(y), stream, 0)，
每个格点的随机数只依赖 (seed, 坐标, stream)。
"""

import numpy as np
from scipy.special import ndtri

from ..core.exceptions import InvalidParameterError

GENERATOR_ID = "philox4x32-10/ndtri"

PHILOX_M4x32_0 = np.uint64(0xD2511F53)
PHILOX_M4x32_1 = np.uint64(0xCD9E8D57)
PHILOX_W32_0 = np.uint64(0x9E3779B9)
PHILOX_W32_1 = np.uint64(0xBB67AE85)
MASK32 = np.uint64(0xFFFFFFFF)
ROUNDS = 10


def check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) < 2**64:
        raise InvalidParameterError(f"种子必须是 64 位无符号整数: seed={seed}")
    return int(seed)


def zigzag(values: np.ndarray) -> np.ndarray:
    """把有符号整数映射为无符号：0,−1,1,−2,... → 0,1,2,3,..."""
    v = np.asarray(values, dtype=np.int64)
    return np.where(v >= 0, 2 * v, -2 * v - 1).astype(np.uint64) & MASK32


def philox4x32(seed: int, c0: np.ndarray, c1: np.ndarray, c2: int = 0, c3: int = 0) -> np.ndarray:
    """
    对一批计数器执行 10 轮 Philox4x32

    Args:
        seed: 64 位种子
        c0, c1: 计数器的前两个字（数组）
        c2, c3: 计数器的后两个字（标量）

    Returns:
        (n, 4) uint64 数组，每个元素为 32 位输出字
    """
    seed = check_seed(seed)
    c0 = np.asarray(c0, dtype=np.uint64) & MASK32
    ctr = [
        c0,
        np.asarray(c1, dtype=np.uint64) & MASK32,
        np.full(c0.shape, c2, dtype=np.uint64) & MASK32,
        np.full(c0.shape, c3, dtype=np.uint64) & MASK32,
    ]
    k0 = np.uint64(seed & 0xFFFFFFFF)
    k1 = np.uint64((seed >> 32) & 0xFFFFFFFF)
    for _ in range(ROUNDS):
        prod0 = ctr[0] * PHILOX_M4x32_0
        prod1 = ctr[2] * PHILOX_M4x32_1
        hi0, lo0 = prod0 >> np.uint64(32), prod0 & MASK32
        hi1, lo1 = prod1 >> np.uint64(32), prod1 & MASK32
        ctr = [
            (hi1 ^ ctr[1] ^ k0) & MASK32,
            lo1,
            (hi0 ^ ctr[3] ^ k1) & MASK32,
            lo0,
        ]
        k0 = (k0 + PHILOX_W32_0) & MASK32
        k1 = (k1 + PHILOX_W32_1) & MASK32
    return np.stack(ctr, axis=-1)


def uniform_open(seed: int, c0: np.ndarray, c1: np.ndarray, stream: int = 0) -> np.ndarray:
    """(0, 1) 开区间上的 53 位均匀数"""
    words = philox4x32(seed, c0, c1, stream)
    bits = ((words[..., 0] << np.uint64(32)) | words[..., 1]) >> np.uint64(11)
    return (bits.astype(np.float64) + 0.5) * 2.0**-53


def site_normals(seed: int, coords: np.ndarray, stream: int = 0) -> np.ndarray:
    """
    格点坐标上的标准正态变量（逆 CDF 变换）

    Args:
        seed: 64 位种子
        coords: (n, 2) 整数坐标
        stream: 子流编号

    Returns:
        长度 n 的 float64 数组
    """
    coords = np.asarray(coords, dtype=np.int64).reshape(-1, 2)
    u = uniform_open(seed, zigzag(coords[:, 0]), zigzag(coords[:, 1]), stream)
    return ndtri(u)
