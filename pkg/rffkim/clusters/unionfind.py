"""numpy 并查集：按秩合并 + 路径压缩，附带整批边的向量化合并"""

from typing import Tuple

import numpy as np


class DisjointSet:
    """
    并查集

    Args:
        n: 元素个数（顶点数 + 幽灵节点数）
    """

    def __init__(self, n: int):
        self.parents = np.arange(n, dtype=np.int64)
        self.ranks = np.zeros(n, dtype=np.int64)

    def __len__(self) -> int:
        return int(len(self.parents))

    def find(self, index: int) -> int:
        parents = self.parents
        root = int(index)
        while parents[root] != root:
            root = int(parents[root])
        # 路径压缩
        node = int(index)
        while parents[node] != root:
            parents[node], node = root, int(parents[node])
        return root

    def union(self, a: int, b: int) -> bool:
        """合并 a、b 所在集合，已在同一集合时返回 False"""
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        ranks = self.ranks
        if ranks[a] < ranks[b]:
            a, b = b, a
        self.parents[b] = a
        if ranks[a] == ranks[b]:
            ranks[a] += 1
        return True

    def _compress(self) -> None:
        a = self.parents
        b = a[a]
        while (a != b).any():
            a = b
            b = a[a]
        self.parents = a

    def union_edges(self, us: np.ndarray, vs: np.ndarray) -> None:
        """
        一次性合并多条边的端点

        每轮把两端根不同的边中较大的根挂到较小的根上，再做指针跳跃压缩，
        直到所有边的两端同根。
        """
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        if us.size == 0:
            return
        self._compress()
        while True:
            ru = self.parents[us]
            rv = self.parents[vs]
            diff = ru != rv
            if not diff.any():
                break
            lo = np.minimum(ru[diff], rv[diff])
            hi = np.maximum(ru[diff], rv[diff])
            np.minimum.at(self.parents, hi, lo)
            np.maximum.at(self.ranks, lo, self.ranks[hi] + 1)
            self._compress()

    def find_all(self) -> np.ndarray:
        """所有元素的根（完全压缩后的父数组）"""
        self._compress()
        return self.parents


def ordered_labels(roots: np.ndarray, num_real: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    按簇中最小真实顶点编号给簇排序编号

    Args:
        roots: find_all() 的结果（含幽灵节点）
        num_real: 真实顶点个数（幽灵节点排在其后）

    Returns:
        (真实顶点的簇编号, 幽灵节点的簇编号；不含真实顶点的幽灵簇为 −1)
    """
    real_roots = roots[:num_real]
    unique, first, inverse = np.unique(real_roots, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    relabel = np.empty(len(unique), dtype=np.int64)
    relabel[order] = np.arange(len(unique))
    labels = relabel[inverse.ravel()]

    ghost_roots = roots[num_real:]
    pos = np.clip(np.searchsorted(unique, ghost_roots), 0, len(unique) - 1)
    found = unique[pos] == ghost_roots
    ghost_labels = np.where(found, relabel[pos], -1).astype(np.int64)
    return labels, ghost_labels
