"""格点图、边界条件与对偶"""

import numpy as np
import pytest

from rffkim.core.exceptions import ConfigException, InvalidGeometryError, InvalidParameterError
from rffkim.lattice import (
    BoundaryCondition,
    DualEdge,
    Rectangle,
    build_annulus,
    build_box,
    build_masked,
    build_rectangle,
    dual_edge,
    dual_of_primal,
    primal_of_dual,
)


class TestBox:
    @pytest.mark.parametrize("N", [0, 1, 2, 5])
    def test_counts(self, N):
        graph = build_box(N)
        side = 2 * N + 1
        assert graph.num_vertices == side * side
        assert graph.num_edges == 2 * side * (side - 1)
        assert len(graph.exterior_boundary) == 4 * side
        assert len(graph.exterior_pairs) == 4 * side

    def test_box1(self, box1):
        assert box1.num_vertices == 9
        assert box1.num_edges == 12
        assert len(box1.interior_boundary) == 8
        assert box1.vertex_index(0, 0) == 4

    def test_ordering(self, box1):
        coords = [tuple(c) for c in box1.coords.tolist()]
        assert coords == sorted(coords)
        # 每个顶点先右邻后上邻
        assert box1.edges[:2].tolist() == [[0, 3], [0, 1]]
        assert np.all(box1.edges[:, 0] < box1.edges[:, 1])

    def test_parity_and_neighbors(self, box1):
        center = box1.vertex_index(0, 0)
        assert box1.parity[center] == 0
        assert sorted(box1.neighbor_table[center].tolist()) == [1, 3, 5, 7]
        corner = box1.vertex_index(-1, -1)
        assert (box1.neighbor_table[corner] < 0).sum() == 2

    def test_negative_side(self):
        with pytest.raises(InvalidGeometryError):
            build_box(-1)

    def test_side_limit(self):
        with pytest.raises(ConfigException):
            build_box(10**6)

    def test_to_json(self):
        data = build_box(0).to_json()
        assert data == {"n": 0, "vertices": [[0, 0]], "edges": []}

    def test_to_networkx(self, box1):
        g = box1.to_networkx()
        assert g.number_of_nodes() == 9
        assert g.number_of_edges() == 12
        closed = box1.to_networkx(np.zeros(box1.num_edges, dtype=bool))
        assert closed.number_of_edges() == 0


class TestOtherShapes:
    def test_annulus(self):
        graph = build_annulus(1, 2)
        assert graph.num_vertices == 25 - 9
        assert not graph.contains(0, 0)
        assert graph.contains(2, 0)
        assert graph.inner == 1

    def test_annulus_invalid(self):
        with pytest.raises(InvalidGeometryError):
            build_annulus(2, 2)
        with pytest.raises(InvalidGeometryError):
            build_annulus(0, 3)

    def test_rectangle(self):
        graph = build_rectangle(2, 3)
        assert graph.num_vertices == 6
        assert graph.num_edges == 7
        assert graph.center == (0, 0)

    def test_masked_requires_inner_box(self):
        mask = np.ones((5, 5), dtype=bool)
        mask[2, 2] = False
        with pytest.raises(InvalidGeometryError):
            build_masked(mask, contains_box=1)
        graph = build_masked(np.ones((5, 5), dtype=bool), contains_box=1)
        assert graph.num_vertices == 25

    def test_linf_diameter(self, box1):
        assert box1.linf_diameter(range(9)) == 2
        assert box1.linf_diameter([]) == 0


class TestBoundary:
    def test_plus_field(self, box1):
        field = BoundaryCondition.plus(box1).boundary_field(box1)
        assert field[box1.vertex_index(-1, -1)] == 2
        assert field[box1.vertex_index(0, 1)] == 1
        assert field[box1.vertex_index(0, 0)] == 0

    def test_wired_groups(self, box1):
        groups = BoundaryCondition.wired().wiring_groups(box1)
        assert len(groups) == 1
        assert sorted(groups[0].tolist()) == sorted(box1.interior_boundary.tolist())
        assert BoundaryCondition.free().wiring_groups(box1) == []

    def test_partition_must_use_boundary(self, box1):
        with pytest.raises(InvalidGeometryError):
            BoundaryCondition.partition(box1, [[box1.vertex_index(0, 0), 0]])
        with pytest.raises(InvalidGeometryError):
            BoundaryCondition.partition(box1, [[0, 1], [1, 2]])

    def test_ising_values(self, box1):
        with pytest.raises(InvalidParameterError):
            BoundaryCondition.ising(box1, 2)
        xi = BoundaryCondition.ising(box1, {(-2, 0): -1})
        assert xi.xi.sum() == -1
        vertices, signs = xi.ghost_links(box1)
        assert vertices.tolist() == [box1.vertex_index(-1, 0)]
        assert signs.tolist() == [-1]

    def test_from_name(self, box1):
        assert BoundaryCondition.from_name("wired", box1).is_fk
        assert BoundaryCondition.from_name("minus", box1).is_ising
        with pytest.raises(InvalidParameterError):
            BoundaryCondition.from_name("periodic", box1)


class TestDual:
    def test_round_trip(self):
        for p, q in [((0, 0), (1, 0)), ((3, -2), (3, -1)), ((-1, 4), (0, 4))]:
            edge = dual_of_primal(p, q)
            assert sorted(primal_of_dual(edge)) == sorted([p, q])

    def test_orientation(self):
        assert dual_of_primal((0, 0), (1, 0)).is_vertical
        assert not dual_of_primal((0, 0), (0, 1)).is_vertical

    def test_every_edge(self, box1):
        seen = {dual_edge(box1, e) for e in range(box1.num_edges)}
        assert len(seen) == box1.num_edges

    def test_not_adjacent(self):
        with pytest.raises(InvalidGeometryError):
            DualEdge((0, 0), (1, 1))
        with pytest.raises(InvalidGeometryError):
            dual_of_primal((0, 0), (2, 0))

    def test_rectangle(self, box1):
        rect = Rectangle(-1, 1, 0, 1)
        assert (rect.width, rect.height) == (2, 1)
        rect.check_inside(box1)
        with pytest.raises(InvalidGeometryError):
            Rectangle(-1, 2, 0, 1).check_inside(box1)
        with pytest.raises(InvalidGeometryError):
            Rectangle(1, 0, 0, 0)
