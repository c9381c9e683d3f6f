"""在可精确枚举的小图上检验 FK / Ising 测度与簇分解的结构性质"""

import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rffkim.clusters import cluster_stats, decompose, f_functional
from rffkim.core.constants import T_C, temperature_from_p
from rffkim.disorder import DisorderField, sample_field
from rffkim.exact import enumerate_model, exact_tv
from rffkim.lattice import BoundaryCondition, build_box, build_rectangle

BOUNDARIES = {"free": BoundaryCondition.free, "wired": BoundaryCondition.wired}
BOX1 = build_box(1)
BOX2 = build_box(2)
RECT23 = build_rectangle(2, 3)
RECT43 = build_rectangle(4, 3)

# 自动夹具只重置全局配置
PROPERTY = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])


def edge_configs(graph):
    return arrays(bool, graph.num_edges)


def field_values(graph):
    return arrays(np.float64, graph.num_vertices, elements=st.floats(-4.0, 4.0))


def _edge_table(graph, T, boundary, field=None):
    dist = enumerate_model("fk", graph, T=T, boundary=boundary, field=field)
    return dist.probabilities, dist.edge_configurations()


def _with_ghost(graph, omega, wired):
    g = graph.to_networkx(omega)
    if wired:
        g.add_edges_from(("ghost", int(v)) for v in graph.interior_boundary)
    return g


class TestCorrelationInequalities:
    @pytest.mark.parametrize("T", [1.5, T_C, 3.0], ids=["low", "crit", "high"])
    @pytest.mark.parametrize("name", ["free", "wired"])
    def test_fkg_edge_events(self, box1, T, name):
        probs, edges = _edge_table(box1, T, BOUNDARIES[name]())
        marginal = probs @ edges
        joint = edges.T.astype(float) @ (probs[:, None] * edges)
        # P(e 开且 f 开) ≥ P(e 开)·P(f 开)
        assert (joint - np.outer(marginal, marginal) >= -1e-12).all()

    def test_fkg_connection_events(self, box1):
        probs, edges = _edge_table(box1, T_C, BoundaryCondition.free())
        free = BoundaryCondition.free()
        labels = np.array([decompose(omega, box1, free).labels for omega in edges])
        origin = box1.vertex_index(0, 0)
        corners = [box1.vertex_index(x, y) for x, y in itertools.product((-1, 1), repeat=2)]
        for a, b in itertools.combinations(corners, 2):
            A = labels[:, origin] == labels[:, a]
            B = labels[:, origin] == labels[:, b]
            assert probs[A & B].sum() >= probs[A].sum() * probs[B].sum() - 1e-12

    @pytest.mark.parametrize("graph", [build_box(1), build_rectangle(2, 3)], ids=["box1", "rect2x3"])
    def test_wired_dominates_free(self, graph):
        for T in (1.5, T_C, 3.0):
            probs_f, edges_f = _edge_table(graph, T, BoundaryCondition.free())
            probs_w, edges_w = _edge_table(graph, T, BoundaryCondition.wired())
            assert (probs_w @ edges_w >= probs_f @ edges_f - 1e-12).all()

    def test_monotone_in_p(self, square2):
        previous = None
        for p in (0.2, 0.4, 0.6, 0.8):
            probs, edges = _edge_table(square2, temperature_from_p(p), BoundaryCondition.free())
            marginal = probs @ edges
            if previous is not None:
                assert (marginal >= previous - 1e-12).all()
            previous = marginal


class TestMarkovProperty:
    @pytest.mark.parametrize("seed", [0, 4, 9])
    def test_centre_spin_given_neighbours(self, box1, seed):
        """Λ_1 上中心自旋在四个邻居条件下的律等于 Λ_0 上以邻居为边界的律"""
        T = 2.0
        field = sample_field(box1, seed, 0.7)
        dist = enumerate_model("ising", box1, T=T, boundary=BoundaryCondition.zero(box1), field=field)
        spins = dist.spin_configurations()
        centre = box1.vertex_index(0, 0)
        offsets = [(1, 0), (-1, 0), (0, 1), (0, -1)]
        neighbours = [box1.vertex_index(x, y) for x, y in offsets]

        box0 = build_box(0)
        inner_field = sample_field(box0, seed, 0.7)
        assert inner_field.values[0] == field.values[centre]
        for eta in itertools.product((-1, 1), repeat=4):
            mask = (spins[:, neighbours] == np.array(eta)).all(axis=1)
            conditional = dist.probabilities[mask & (spins[:, centre] == 1)].sum() / dist.probabilities[mask].sum()
            boundary = BoundaryCondition.ising(box0, dict(zip(offsets, eta)))
            inner = enumerate_model("ising", box0, T=T, boundary=boundary, field=inner_field)
            assert conditional == pytest.approx((1 + inner.spin_mean(0)) / 2, abs=1e-12)

    def test_edge_given_outside(self, square2):
        """2×2 上一条边在其余边条件下的开概率只取决于两端点是否已连通"""
        T = T_C
        p = 1 - np.exp(-2 / T)
        free = BoundaryCondition.free()
        probs, edges = _edge_table(square2, T, free)
        e = 0
        u, v = square2.edges[e]
        others = np.delete(np.arange(square2.num_edges), e)
        for rest in itertools.product((False, True), repeat=len(others)):
            mask = (edges[:, others] == np.array(rest)).all(axis=1)
            conditional = probs[mask & edges[:, e]].sum() / probs[mask].sum()
            omega = np.zeros(square2.num_edges, dtype=bool)
            omega[others] = rest
            decomp = decompose(omega, square2, free)
            expected = p if decomp.labels[u] == decomp.labels[v] else p / (p + 2 * (1 - p))
            assert conditional == pytest.approx(expected, abs=1e-12)


class TestClusterIdentities:
    @PROPERTY
    @given(omega=edge_configs(BOX2), name=st.sampled_from(["free", "wired"]))
    def test_sum_sq_counts_connected_pairs(self, omega, name):
        g = _with_ghost(BOX2, omega, name == "wired")
        pairs = sum(sum(1 for w in nx.node_connected_component(g, v) if w != "ghost") for v in range(BOX2.num_vertices))
        assert cluster_stats(decompose(omega, BOX2, BOUNDARIES[name]())).sum_sq == pairs

    @PROPERTY
    @given(omega=edge_configs(RECT43))
    def test_euler_relation(self, omega):
        cycles = len(nx.cycle_basis(RECT43.to_networkx(omega)))
        kappa = decompose(omega, RECT43, BoundaryCondition.free()).kappa
        assert kappa == RECT43.num_vertices - int(omega.sum()) + cycles

    @PROPERTY
    @given(omega=edge_configs(BOX2), edge=st.integers(0, BOX2.num_edges - 1), name=st.sampled_from(["free", "wired"]))
    def test_opening_an_edge(self, omega, edge, name):
        gamma = BOUNDARIES[name]()
        opened = omega.copy()
        opened[edge] = True
        before = cluster_stats(decompose(omega, BOX2, gamma))
        after = cluster_stats(decompose(opened, BOX2, gamma))
        assert before.kappa - 1 <= after.kappa <= before.kappa
        assert after.max_size >= before.max_size
        assert after.sum_sq >= before.sum_sq
        assert after.boundary_size >= before.boundary_size


class TestFieldSymmetry:
    @PROPERTY
    @given(
        omega=edge_configs(BOX1),
        values=field_values(BOX1),
        epsilon=st.floats(0.05, 2.0),
        name=st.sampled_from(["free", "wired"]),
    )
    def test_functional_even_in_field(self, omega, values, epsilon, name):
        field = DisorderField.from_values(values, epsilon)
        flipped = DisorderField.from_values(-values, epsilon)
        decomp = decompose(omega, BOX1, BOUNDARIES[name]())
        assert f_functional(decomp, flipped, 2.0) == pytest.approx(f_functional(decomp, field, 2.0), rel=1e-12, abs=1e-12)

    def test_fk_law_even_in_field(self, square2):
        field = sample_field(square2, 5, 0.8)
        flipped = DisorderField.from_values(-field.values, field.epsilon)
        for gamma in (BoundaryCondition.free(), BoundaryCondition.wired()):
            a = enumerate_model("fk", square2, T=T_C, boundary=gamma, field=field)
            b = enumerate_model("fk", square2, T=T_C, boundary=gamma, field=flipped)
            np.testing.assert_allclose(a.probabilities, b.probabilities, atol=1e-14)
            assert a.log_partition == pytest.approx(b.log_partition, rel=1e-14)


class TestTotalVariationMetric:
    @PROPERTY
    @given(
        model=st.sampled_from(["ising", "fk"]),
        seeds=st.lists(st.integers(0, 2**32 - 1), min_size=3, max_size=3),
        epsilons=st.lists(st.floats(0.0, 1.5), min_size=3, max_size=3),
    )
    def test_symmetric_and_triangle(self, model, seeds, epsilons):
        dists = [
            enumerate_model(model, RECT23, T=2.0, field=sample_field(RECT23, s, eps)) for s, eps in zip(seeds, epsilons)
        ]
        for a, b in itertools.permutations(dists, 2):
            assert exact_tv(a, b) == exact_tv(b, a)
            assert 0.0 <= exact_tv(a, b) <= 1.0
        for a, b, c in itertools.permutations(dists, 3):
            assert exact_tv(a, c) <= exact_tv(a, b) + exact_tv(b, c) + 1e-12
        assert exact_tv(dists[0], dists[0]) == 0.0
