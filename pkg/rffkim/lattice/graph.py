"""
Z² 的有限子图

顶点按 (x, y) 字典序编号，边按 "顶点编号 → 先右邻后上邻" 的顺序编号，
同一构造参数下编号完全确定。
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from ..core.config import get_config
from ..core.exceptions import ConfigException, InvalidGeometryError

logger = logging.getLogger(__name__)

# 四个方向：+x, −x, +y, −y
DIRECTIONS = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class LatticeGraph:
    """
    Z² 的有限导出子图

    Attributes:
        coords: (V, 2) 顶点坐标，字典序
        edges: (E, 2) 顶点编号对，i < j
        n: 边长参数 N（盒子 Λ_N 的 N；一般区域为包含它的最小盒子参数）
        center: 中心点
        kind: 构造方式 box / annulus / rectangle / masked
    """

    coords: np.ndarray
    edges: np.ndarray
    n: int
    center: Tuple[int, int] = (0, 0)
    kind: str = "masked"
    inner: Optional[int] = None
    _index: Dict[Tuple[int, int], int] = field(init=False, repr=False)
    neighbor_table: np.ndarray = field(init=False, repr=False)
    interior_boundary: np.ndarray = field(init=False, repr=False)
    exterior_boundary: np.ndarray = field(init=False, repr=False)
    exterior_pairs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        coords = self.coords
        index = {(int(x), int(y)): i for i, (x, y) in enumerate(coords)}
        table = np.full((len(coords), 4), -1, dtype=np.int64)
        ext_points: List[Tuple[int, int]] = []
        missing: List[Tuple[int, Tuple[int, int]]] = []
        for i, (x, y) in enumerate(coords):
            for d, (dx, dy) in enumerate(DIRECTIONS):
                q = (int(x + dx), int(y + dy))
                j = index.get(q)
                if j is None:
                    ext_points.append(q)
                    missing.append((i, q))
                else:
                    table[i, d] = j

        ext_sorted = sorted(set(ext_points))
        ext_index = {q: k for k, q in enumerate(ext_sorted)}
        pairs = np.array(
            [(i, ext_index[q]) for i, q in missing], dtype=np.int64
        ).reshape(-1, 2)

        for arr in (coords, self.edges, table, pairs):
            arr.setflags(write=False)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "neighbor_table", table)
        object.__setattr__(
            self,
            "interior_boundary",
            np.unique(pairs[:, 0]) if len(pairs) else np.zeros(0, dtype=np.int64),
        )
        object.__setattr__(
            self, "exterior_boundary", np.array(ext_sorted, dtype=np.int64).reshape(-1, 2)
        )
        object.__setattr__(self, "exterior_pairs", pairs)

    # ------------------------------------------------------------------ 基本属性

    @property
    def num_vertices(self) -> int:
        return int(len(self.coords))

    @property
    def num_edges(self) -> int:
        return int(len(self.edges))

    @property
    def parity(self) -> np.ndarray:
        """棋盘染色：(x + y) mod 2"""
        return (self.coords[:, 0] + self.coords[:, 1]) % 2

    def vertex_index(self, x: int, y: int) -> int:
        try:
            return self._index[(int(x), int(y))]
        except KeyError:
            raise InvalidGeometryError(f"顶点 ({x}, {y}) 不在图中") from None

    def contains(self, x: int, y: int) -> bool:
        return (int(x), int(y)) in self._index

    def edge_index(self, u: int, v: int) -> int:
        """按顶点编号查找边编号"""
        a, b = min(u, v), max(u, v)
        hits = np.flatnonzero((self.edges[:, 0] == a) & (self.edges[:, 1] == b))
        if len(hits) == 0:
            raise InvalidGeometryError(f"边 ({u}, {v}) 不在图中")
        return int(hits[0])

    def box_vertices(self, m: int, center: Tuple[int, int] = (0, 0)) -> np.ndarray:
        """Λ_m(center) ∩ V 的顶点编号"""
        dx = np.abs(self.coords[:, 0] - center[0])
        dy = np.abs(self.coords[:, 1] - center[1])
        return np.flatnonzero(np.maximum(dx, dy) <= m)

    def linf_diameter(self, vertices: Iterable[int]) -> int:
        """顶点集合的 l∞ 直径"""
        idx = np.asarray(list(vertices), dtype=np.int64)
        if idx.size == 0:
            return 0
        pts = self.coords[idx]
        span = pts.max(axis=0) - pts.min(axis=0)
        return int(span.max())

    # ------------------------------------------------------------------ 导出

    def to_json(self) -> Dict[str, Any]:
        """{"n", "vertices", "edges"}，用于 golden 文件比对"""
        return {
            "n": int(self.n),
            "vertices": self.coords.tolist(),
            "edges": self.edges.tolist(),
        }

    def to_networkx(self, edge_mask: Optional[np.ndarray] = None) -> nx.Graph:
        """
        转换为 networkx 图

        Args:
            edge_mask: 只保留 mask 为真的边（例如开放边）
        """
        g = nx.Graph()
        g.add_nodes_from(range(self.num_vertices))
        edges = self.edges if edge_mask is None else self.edges[np.asarray(edge_mask, dtype=bool)]
        g.add_edges_from(map(tuple, edges.tolist()))
        return g


def from_vertices(
    points: Iterable[Sequence[int]],
    n: int,
    center: Tuple[int, int] = (0, 0),
    kind: str = "masked",
    inner: Optional[int] = None,
) -> LatticeGraph:
    """
    由顶点集合构造导出子图

    Args:
        points: 整数坐标集合（可重复，可无序）
        n: 边长参数
        center: 中心
        kind: 构造方式标签

    Returns:
        LatticeGraph
    """
    pts = np.asarray(list(points), dtype=np.int64).reshape(-1, 2)
    if len(pts) == 0:
        raise InvalidGeometryError("顶点集合不能为空")
    pts = np.unique(pts, axis=0)  # 字典序
    index = {(int(x), int(y)): i for i, (x, y) in enumerate(pts)}
    edges = []
    for i, (x, y) in enumerate(pts):
        for q in ((int(x) + 1, int(y)), (int(x), int(y) + 1)):
            j = index.get(q)
            if j is not None:
                edges.append((i, j))
    edge_arr = np.array(edges, dtype=np.int64).reshape(-1, 2)
    return LatticeGraph(coords=pts, edges=edge_arr, n=int(n), center=tuple(center), kind=kind, inner=inner)


def _check_side(N: int) -> None:
    if N < 0:
        raise InvalidGeometryError(f"盒子参数必须非负: N={N}")
    limit = get_config().guards.max_box_side
    if N > limit:
        raise ConfigException(f"盒子参数 N={N} 超过配置上限 max_box_side={limit}")


def _square(N: int, center: Tuple[int, int]) -> np.ndarray:
    cx, cy = center
    xs, ys = np.meshgrid(np.arange(-N, N + 1) + cx, np.arange(-N, N + 1) + cy, indexing="ij")
    return np.stack([xs.ravel(), ys.ravel()], axis=1)


def build_box(N: int, center: Tuple[int, int] = (0, 0)) -> LatticeGraph:
    """Λ_N(center) = center + [−N, N]²"""
    _check_side(N)
    graph = from_vertices(_square(N, center), n=N, center=center, kind="box")
    logger.debug("构造盒子 Λ_%d%s: |V|=%d, |E|=%d", N, center, graph.num_vertices, graph.num_edges)
    return graph


def build_annulus(m: int, n: int, center: Tuple[int, int] = (0, 0)) -> LatticeGraph:
    """环形区域 Λ_n \\ Λ_m"""
    if not (0 < m < n):
        raise InvalidGeometryError(f"环形区域要求 0 < m < n: m={m}, n={n}")
    _check_side(n)
    pts = _square(n, center)
    offset = np.abs(pts - np.asarray(center)).max(axis=1)
    return from_vertices(pts[offset > m], n=n, center=center, kind="annulus", inner=m)


def build_rectangle(width: int, height: int, origin: Tuple[int, int] = (0, 0)) -> LatticeGraph:
    """width × height 个顶点的矩形，左下角为 origin"""
    if width < 1 or height < 1:
        raise InvalidGeometryError(f"矩形尺寸必须为正: {width}×{height}")
    ox, oy = origin
    xs, ys = np.meshgrid(np.arange(width) + ox, np.arange(height) + oy, indexing="ij")
    pts = np.stack([xs.ravel(), ys.ravel()], axis=1)
    return from_vertices(pts, n=max(width, height) // 2, center=(ox, oy), kind="rectangle")


def build_masked(mask: np.ndarray, center: Tuple[int, int] = (0, 0), contains_box: Optional[int] = None) -> LatticeGraph:
    """
    由 (2R+1)×(2R+1) 布尔掩码构造区域 Ω ⊂ Λ_R(center)

    Args:
        mask: mask[x+R, y+R] 为真表示 (x, y) ∈ Ω
        center: 掩码中心
        contains_box: 若给出 N，则要求 Λ_N ⊂ Ω

    Returns:
        LatticeGraph，n 取 contains_box（若给出）否则取 R
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2 or mask.shape[0] != mask.shape[1] or mask.shape[0] % 2 == 0:
        raise InvalidGeometryError(f"掩码必须是奇数边长的方阵: shape={mask.shape}")
    R = mask.shape[0] // 2
    pts = _square(R, center)
    keep = mask.ravel()
    graph = from_vertices(pts[keep], n=contains_box if contains_box is not None else R, center=center)
    if contains_box is not None:
        inner = _square(contains_box, center)
        missing = [tuple(p) for p in inner if not graph.contains(*p)]
        if missing:
            raise InvalidGeometryError(f"区域未包含 Λ_{contains_box}: 缺少 {missing[:3]}")
    return graph
