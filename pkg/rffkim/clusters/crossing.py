"""矩形的原始/对偶穿越事件"""

from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from ..lattice.dual import DualEdge, Rectangle, primal_of_dual
from ..lattice.graph import LatticeGraph
from .decomposition import as_edge_config
from .unionfind import DisjointSet


@dataclass(frozen=True)
class CrossingEvents:
    H: bool
    V: bool
    H_dual: bool
    V_dual: bool

    def to_dict(self) -> Dict[str, bool]:
        return {"H": self.H, "V": self.V, "H_dual": self.H_dual, "V_dual": self.V_dual}


def _edge_lookup(graph: LatticeGraph) -> Dict[Tuple[Tuple[int, int], Tuple[int, int]], int]:
    coords = [tuple(map(int, p)) for p in graph.coords]
    return {(coords[i], coords[j]): e for e, (i, j) in enumerate(graph.edges.tolist())}


def _connects(nodes: List[Tuple[int, int]], links: List[Tuple[int, int]], start, end) -> bool:
    """nodes 中满足 start 的点与满足 end 的点是否经 links 连通"""
    if not nodes:
        return False
    index = {p: k for k, p in enumerate(nodes)}
    dsu = DisjointSet(len(nodes))
    if links:
        arr = np.array([(index[p], index[q]) for p, q in links], dtype=np.int64)
        dsu.union_edges(arr[:, 0], arr[:, 1])
    roots = dsu.find_all()
    starts = {int(roots[index[p]]) for p in nodes if start(p)}
    return any(int(roots[index[p]]) in starts for p in nodes if end(p))


def _primal_crossing(open_mask, lookup, rect: Rectangle, horizontal: bool) -> bool:
    nodes = [(x, y) for x in range(rect.a, rect.b + 1) for y in range(rect.c, rect.d + 1)]
    links = []
    for (x, y) in nodes:
        for q in ((x + 1, y), (x, y + 1)):
            if rect.contains_point(*q) and open_mask[lookup[((x, y), q)]]:
                links.append(((x, y), q))
    if horizontal:
        return _connects(nodes, links, lambda p: p[0] == rect.a, lambda p: p[0] == rect.b)
    return _connects(nodes, links, lambda p: p[1] == rect.c, lambda p: p[1] == rect.d)


def _dual_crossing(open_mask, lookup, rect: Rectangle, horizontal: bool) -> bool:
    """
    对偶穿越：对偶点 (i, j) 表示 (i+½, j+½)

    横向对偶矩形为 [a−½, b+½]×[c+½, d−½]，纵向为 [a+½, b−½]×[c−½, d+½]。
    只使用与 R 内原始边相交的对偶边；对偶边为开当且仅当原始边关闭。
    """
    if horizontal:
        irange, jrange = range(rect.a - 1, rect.b + 1), range(rect.c, rect.d)
    else:
        irange, jrange = range(rect.a, rect.b), range(rect.c - 1, rect.d + 1)
    nodes = [(i, j) for i in irange for j in jrange]
    inside = set(nodes)
    links = []
    for (i, j) in nodes:
        for q in ((i + 1, j), (i, j + 1)):
            if q not in inside:
                continue
            p0, p1 = primal_of_dual(DualEdge((i, j), q))
            if not (rect.contains_point(*p0) and rect.contains_point(*p1)):
                continue
            if not open_mask[lookup[(p0, p1)]]:
                links.append(((i, j), q))
    if horizontal:
        return _connects(nodes, links, lambda p: p[0] == rect.a - 1, lambda p: p[0] == rect.b)
    return _connects(nodes, links, lambda p: p[1] == rect.c - 1, lambda p: p[1] == rect.d)


def crossing_events(omega, graph: LatticeGraph, rect: Rectangle) -> CrossingEvents:
    """
    矩形 R 的四个穿越事件

    Args:
        omega: 边构型
        graph: 格点图（须包含 R）
        rect: 矩形

    Returns:
        H/V 为原始开路穿越，H_dual/V_dual 为对偶开路穿越
    """
    rect.check_inside(graph)
    open_mask = as_edge_config(omega, graph)
    lookup = _edge_lookup(graph)
    return CrossingEvents(
        H=_primal_crossing(open_mask, lookup, rect, horizontal=True),
        V=_primal_crossing(open_mask, lookup, rect, horizontal=False),
        H_dual=_dual_crossing(open_mask, lookup, rect, horizontal=True),
        V_dual=_dual_crossing(open_mask, lookup, rect, horizontal=False),
    )
