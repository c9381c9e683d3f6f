"""
对偶格与矩形

对偶顶点用整数对 (a, b) 表示 Z² + (½, ½) 中的点 (a + ½, b + ½)，
全部运算保持整数。
"""

from dataclasses import dataclass
from typing import Tuple

from ..core.exceptions import InvalidGeometryError
from .graph import LatticeGraph

Point = Tuple[int, int]


@dataclass(frozen=True, order=True)
class DualEdge:
    """对偶边，端点按字典序存放"""

    u: Point
    v: Point

    def __post_init__(self):
        if self.v < self.u:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)
        if abs(self.u[0] - self.v[0]) + abs(self.u[1] - self.v[1]) != 1:
            raise InvalidGeometryError(f"对偶边端点不相邻: {self.u}, {self.v}")

    @property
    def is_vertical(self) -> bool:
        return self.u[0] == self.v[0]

    def half_coordinates(self) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        """仅用于展示的实坐标"""
        return (
            (self.u[0] + 0.5, self.u[1] + 0.5),
            (self.v[0] + 0.5, self.v[1] + 0.5),
        )


def dual_of_primal(p: Point, q: Point) -> DualEdge:
    """与原始边 {p, q} 相交的唯一对偶边"""
    (x0, y0), (x1, y1) = sorted([tuple(p), tuple(q)])
    if (x1 - x0, y1 - y0) == (1, 0):
        # 水平边 → 竖直对偶边 {(x+½, y−½), (x+½, y+½)}
        return DualEdge((x0, y0 - 1), (x0, y0))
    if (x1 - x0, y1 - y0) == (0, 1):
        # 竖直边 → 水平对偶边 {(x−½, y+½), (x+½, y+½)}
        return DualEdge((x0 - 1, y0), (x0, y0))
    raise InvalidGeometryError(f"不是最近邻边: {p}, {q}")


def primal_of_dual(edge: DualEdge) -> Tuple[Point, Point]:
    """与对偶边相交的唯一原始边（dual_of_primal 的逆）"""
    (a0, b0), (a1, b1) = edge.u, edge.v
    if edge.is_vertical:
        return (a0, b1), (a0 + 1, b1)
    return (a1, b0), (a1, b0 + 1)


def dual_edge(graph: LatticeGraph, e: int) -> DualEdge:
    """图中第 e 条边的对偶边"""
    if not 0 <= e < graph.num_edges:
        raise InvalidGeometryError(f"边编号越界: {e}")
    i, j = graph.edges[e]
    return dual_of_primal(tuple(graph.coords[i]), tuple(graph.coords[j]))


@dataclass(frozen=True)
class Rectangle:
    """矩形 [a, b] × [c, d]"""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a > self.b or self.c > self.d:
            raise InvalidGeometryError(f"矩形角点非法: [{self.a},{self.b}]×[{self.c},{self.d}]")

    @property
    def width(self) -> int:
        return self.b - self.a

    @property
    def height(self) -> int:
        return self.d - self.c

    def contains_point(self, x: int, y: int) -> bool:
        return self.a <= x <= self.b and self.c <= y <= self.d

    def check_inside(self, graph: LatticeGraph) -> None:
        """矩形的所有格点都须在图中"""
        for x in range(self.a, self.b + 1):
            for y in range(self.c, self.d + 1):
                if not graph.contains(x, y):
                    raise InvalidGeometryError(f"矩形点 ({x}, {y}) 不在图中")
