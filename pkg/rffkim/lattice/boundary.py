"""边界条件：Ising 自旋边界 ξ 与 FK 划分边界 γ"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.exceptions import InvalidGeometryError, InvalidParameterError
from .graph import LatticeGraph


class BoundaryKind(str, Enum):
    ISING_SPIN = "ising_spin"
    FK_FREE = "fk_free"
    FK_WIRED = "fk_wired"
    FK_PARTITION = "fk_partition"


@dataclass(frozen=True, eq=False)
class BoundaryCondition:
    """
    边界条件

    IsingSpin 的 xi 与 graph.exterior_boundary 逐点对齐，取值 {−1, 0, +1}；
    FkPartition 的 groups 为 ∂_int G 中两两不交的顶点编号组。FkWired 等价于
    把整个 ∂_int G 作为单独一组。
    """

    kind: BoundaryKind
    xi: Optional[np.ndarray] = None
    groups: Tuple[Tuple[int, ...], ...] = ()
    label: str = ""

    # ------------------------------------------------------------------ 构造

    @classmethod
    def ising(
        cls,
        graph: LatticeGraph,
        values: Union[int, Mapping[Tuple[int, int], int], Sequence[int], np.ndarray],
        label: str = "ising",
    ) -> "BoundaryCondition":
        """
        Ising 自旋边界

        Args:
            graph: 所属图
            values: 常数、按外边界坐标的映射，或与 exterior_boundary 对齐的数组
            label: 名称
        """
        ext = graph.exterior_boundary
        if isinstance(values, (int, np.integer)):
            xi = np.full(len(ext), int(values), dtype=np.int64)
        elif isinstance(values, Mapping):
            xi = np.array([int(values.get((int(x), int(y)), 0)) for x, y in ext], dtype=np.int64)
        else:
            xi = np.asarray(values, dtype=np.int64).copy()
            if xi.shape != (len(ext),):
                raise InvalidGeometryError(
                    f"ξ 长度 {xi.shape} 与外边界点数 {len(ext)} 不一致"
                )
        if not np.isin(xi, (-1, 0, 1)).all():
            raise InvalidParameterError("ξ 只能取 −1, 0, +1")
        xi.setflags(write=False)
        return cls(kind=BoundaryKind.ISING_SPIN, xi=xi, label=label)

    @classmethod
    def plus(cls, graph: LatticeGraph) -> "BoundaryCondition":
        return cls.ising(graph, 1, label="plus")

    @classmethod
    def minus(cls, graph: LatticeGraph) -> "BoundaryCondition":
        return cls.ising(graph, -1, label="minus")

    @classmethod
    def zero(cls, graph: LatticeGraph) -> "BoundaryCondition":
        return cls.ising(graph, 0, label="zero")

    @classmethod
    def free(cls) -> "BoundaryCondition":
        return cls(kind=BoundaryKind.FK_FREE, label="free")

    @classmethod
    def wired(cls) -> "BoundaryCondition":
        return cls(kind=BoundaryKind.FK_WIRED, label="wired")

    @classmethod
    def partition(cls, graph: LatticeGraph, groups: Sequence[Sequence[int]]) -> "BoundaryCondition":
        """FK 划分边界，各组须为 ∂_int G 的两两不交子集"""
        boundary = set(graph.interior_boundary.tolist())
        seen: set = set()
        normalized = []
        for group in groups:
            members = tuple(sorted(int(v) for v in group))
            if not set(members) <= boundary:
                raise InvalidGeometryError(f"划分组 {members} 不是 ∂_int G 的子集")
            if seen & set(members):
                raise InvalidGeometryError(f"划分组 {members} 与其他组相交")
            seen |= set(members)
            if len(members) > 1:
                normalized.append(members)
        normalized.sort()
        return cls(kind=BoundaryKind.FK_PARTITION, groups=tuple(normalized), label="partition")

    @classmethod
    def from_name(cls, name: str, graph: LatticeGraph) -> "BoundaryCondition":
        """CLI 名称：free / wired / plus / minus / zero"""
        factories = {
            "free": lambda: cls.free(),
            "wired": lambda: cls.wired(),
            "plus": lambda: cls.plus(graph),
            "minus": lambda: cls.minus(graph),
            "zero": lambda: cls.zero(graph),
        }
        if name not in factories:
            raise InvalidParameterError(f"未知边界条件: {name}")
        return factories[name]()

    # ------------------------------------------------------------------ 查询

    @property
    def is_ising(self) -> bool:
        return self.kind == BoundaryKind.ISING_SPIN

    @property
    def is_fk(self) -> bool:
        return not self.is_ising

    def _check_graph(self, graph: LatticeGraph) -> None:
        if self.is_ising and len(self.xi) != len(graph.exterior_boundary):
            raise InvalidGeometryError("边界条件与图的外边界不匹配")

    def wiring_groups(self, graph: LatticeGraph) -> List[np.ndarray]:
        """FK 接线组；Ising 边界与 free 返回空列表"""
        self._check_graph(graph)
        if self.kind == BoundaryKind.FK_WIRED:
            return [graph.interior_boundary] if len(graph.interior_boundary) > 1 else []
        if self.kind == BoundaryKind.FK_PARTITION:
            return [np.asarray(g, dtype=np.int64) for g in self.groups]
        return []

    def boundary_field(self, graph: LatticeGraph) -> np.ndarray:
        """每个顶点的 Σ_{v∈∂_ext, v∼u} ξ_v；非 Ising 边界为零"""
        self._check_graph(graph)
        out = np.zeros(graph.num_vertices, dtype=np.float64)
        if self.is_ising and len(graph.exterior_pairs):
            pairs = graph.exterior_pairs
            np.add.at(out, pairs[:, 0], self.xi[pairs[:, 1]].astype(np.float64))
        return out

    def ghost_links(self, graph: LatticeGraph) -> Tuple[np.ndarray, np.ndarray]:
        """
        Ising 边界下与非零外部自旋相连的边界边

        Returns:
            (顶点编号, 外部自旋符号)，每条边界边一项
        """
        self._check_graph(graph)
        if not self.is_ising or len(graph.exterior_pairs) == 0:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        pairs = graph.exterior_pairs
        signs = self.xi[pairs[:, 1]]
        keep = signs != 0
        return pairs[keep, 0], signs[keep]

    def describe(self) -> Dict[str, Any]:
        """用于模型标签与清单"""
        out: Dict[str, Any] = {"kind": self.kind.value, "label": self.label}
        if self.is_ising:
            out["xi"] = self.xi.tolist()
        if self.kind == BoundaryKind.FK_PARTITION:
            out["groups"] = [list(g) for g in self.groups]
        return out
