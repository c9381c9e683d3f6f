"""精确枚举：边缘等价、Radon–Nikodym 恒等式与配分函数展开"""

import math

import numpy as np
import pytest

from rffkim.clusters import decompose, f_functional
from rffkim.core.constants import P_C, T_C
from rffkim.core.exceptions import IncompatibleDistributionsError, InvalidParameterError, TooLargeError
from rffkim.disorder import DisorderField, sample_field
from rffkim.estimators import p0_margin
from rffkim.exact import (
    check_product_tv_bound,
    decode_bits,
    encode_bits,
    enumerate_model,
    es_joint_log_weight,
    exact_tv,
    fk_log_weight,
    ising_log_weight,
    partition_ratio_exact,
    product_tv,
    single_site_tv,
    single_site_tv_lower_bound,
    sublattice_conditional_tv,
)
from rffkim.lattice import BoundaryCondition, build_box, build_rectangle


class TestEncoding:
    def test_codes(self):
        bits = decode_bits(np.arange(8), 3)
        assert bits[5].tolist() == [1, 0, 1]
        assert encode_bits(bits).tolist() == list(range(8))

    def test_probabilities_sum(self, box1):
        dist = enumerate_model("ising", box1, T=2.0, field=sample_field(box1, 3, 0.4))
        assert dist.probabilities.sum() == pytest.approx(1.0, abs=1e-12)
        assert dist.probabilities.shape == (512,)

    def test_guard(self):
        with pytest.raises(TooLargeError):
            enumerate_model("ising", build_box(3), T=2.0)

    def test_unknown_model(self, square2):
        with pytest.raises(InvalidParameterError):
            enumerate_model("potts", square2, T=2.0)

    def test_thread_independent(self, box1):
        field = sample_field(box1, 8, 0.7)
        a = enumerate_model("fk", box1, T=T_C, field=field, threads=1)
        b = enumerate_model("fk", box1, T=T_C, field=field, threads=4)
        assert a.log_partition == b.log_partition
        assert np.array_equal(a.probabilities, b.probabilities)


class TestWeights:
    def test_joint_matches_single(self, square2):
        field = sample_field(square2, 7, 0.3)
        dist = enumerate_model("joint", square2, T=T_C, field=field)
        nv = square2.num_vertices
        for code, bits in enumerate(dist.configurations()):
            sigma = 2 * bits[:nv].astype(int) - 1
            omega = bits[nv:]
            expected = es_joint_log_weight(sigma, omega, square2, field=field, T=T_C)
            assert dist.log_weights[code] == pytest.approx(expected, abs=1e-12) or (
                np.isneginf(expected) and np.isneginf(dist.log_weights[code])
            )

    def test_fk_batch_matches_single(self, box1):
        field = sample_field(box1, 2, 0.5)
        wired = BoundaryCondition.wired()
        dist = enumerate_model("fk", box1, T=2.0, boundary=wired, field=field)
        rng = np.random.default_rng(0)
        for code in rng.integers(0, 2**box1.num_edges, size=50):
            omega = decode_bits(np.array([code]), box1.num_edges)[0]
            expected = fk_log_weight(omega, box1, gamma=wired, field=field, T=2.0)
            assert dist.log_weights[code] == pytest.approx(expected, abs=1e-10)

    def test_ising_weight(self, box1):
        sigma = np.ones(9, dtype=int)
        # 12 条内部边加 12 条外边界边
        assert ising_log_weight(sigma, box1, 2.0, BoundaryCondition.plus(box1)) == pytest.approx(12.0)
        with pytest.raises(InvalidParameterError):
            ising_log_weight(np.zeros(9), box1, 2.0)

    def test_independent_p_and_T(self):
        # 单边、h = (1, 1)、T = 1、ε = 1、p = 1/2
        graph = build_rectangle(2, 1)
        field = DisorderField.from_values([1.0, 1.0], 1.0)
        dist = enumerate_model("fk", graph, p=0.5, T=1.0, field=field)
        expected = math.cosh(2) / (math.cosh(2) + 2 * math.cosh(1) ** 2)
        assert dist.probabilities[1] == pytest.approx(expected, abs=1e-12)
        assert expected == pytest.approx(0.44129, abs=1e-5)
        closed, opened = (fk_log_weight(np.array([w]), graph, p=0.5, field=field, T=1.0) for w in (0, 1))
        assert opened - closed == pytest.approx(math.log(math.cosh(2) / (2 * math.cosh(1) ** 2)))
        with pytest.raises(InvalidParameterError):
            enumerate_model("fk", graph, p=1.0, T=1.0)


class TestMarginals:
    @pytest.mark.parametrize("shape", [(2, 2), (2, 3)])
    @pytest.mark.parametrize("epsilon", [0.0, 0.3])
    def test_spin_marginal_is_rfim(self, shape, epsilon):
        graph = build_rectangle(*shape)
        field = sample_field(graph, 7, epsilon)
        joint = enumerate_model("joint", graph, T=T_C, field=field)
        ising = enumerate_model("ising", graph, T=T_C, field=field)
        assert np.max(np.abs(joint.spin_marginal().probabilities - ising.probabilities)) <= 1e-12

    @pytest.mark.parametrize("shape", [(2, 2), (2, 3)])
    def test_edge_marginal_is_fk(self, shape):
        graph = build_rectangle(*shape)
        joint = enumerate_model("joint", graph, p=P_C)
        fk = enumerate_model("fk", graph, p=P_C)
        assert np.max(np.abs(joint.edge_marginal().probabilities - fk.probabilities)) <= 1e-12

    def test_edge_marginal_with_field(self, square2):
        field = sample_field(square2, 7, 0.3)
        joint = enumerate_model("joint", square2, T=T_C, field=field)
        fk = enumerate_model("fk", square2, T=T_C, field=field)
        assert np.max(np.abs(joint.edge_marginal().probabilities - fk.probabilities)) <= 1e-12

    def test_joint_rejects_spin_boundary(self, square2):
        with pytest.raises(InvalidParameterError):
            enumerate_model("joint", square2, T=2.0, boundary=BoundaryCondition.plus(square2))

    def test_conditional_spins_given_edges(self, square2):
        field = sample_field(square2, 7, 0.3)
        table = enumerate_model("joint", square2, T=T_C, field=field).as_table()
        nv = square2.num_vertices
        spins = 2 * decode_bits(np.arange(2**nv), nv).astype(int) - 1
        for code, row in enumerate(table):
            omega = decode_bits(np.array([code]), square2.num_edges)[0]
            decomp = decompose(omega, square2, BoundaryCondition.free())
            conditional = row / row.sum()
            h_c = decomp.field_sums(field) * field.epsilon
            plus = np.exp(h_c / T_C) / (2 * np.cosh(h_c / T_C))
            for s, prob in zip(spins, conditional):
                per_cluster = [s[decomp.labels == c] for c in range(decomp.kappa)]
                if any(len(set(v.tolist())) > 1 for v in per_cluster):
                    assert prob == 0.0
                    continue
                expected = np.prod([plus[c] if v[0] == 1 else 1 - plus[c] for c, v in enumerate(per_cluster)])
                assert prob == pytest.approx(expected, abs=1e-12)


class TestRadonNikodym:
    @pytest.mark.parametrize("gamma", [BoundaryCondition.free(), BoundaryCondition.wired()], ids=["free", "wired"])
    def test_ratio_identity(self, square2, gamma):
        T = T_C
        for seed in range(10):
            field = sample_field(square2, seed, 0.8)
            with_field = enumerate_model("fk", square2, T=T, boundary=gamma, field=field)
            without = enumerate_model("fk", square2, T=T, boundary=gamma, field=field.with_epsilon(0.0))
            z = partition_ratio_exact(square2, gamma, field, T=T)
            for code, omega in enumerate(with_field.configurations()):
                F = f_functional(decompose(omega, square2, gamma), field, T)
                ratio = with_field.probabilities[code] / without.probabilities[code]
                assert ratio == pytest.approx(z * math.exp(F), rel=1e-10)

    def test_inverse_ratio_is_field_average(self, square2):
        field = sample_field(square2, 4, 0.6)
        ising = enumerate_model("ising", square2, T=2.0, field=field.with_epsilon(0.0))
        W = ising.spin_configurations() @ field.scaled / 2.0
        z = partition_ratio_exact(square2, BoundaryCondition.free(), field, T=2.0)
        assert 1.0 / z == pytest.approx(ising.expectation(np.exp(W)), rel=1e-10)

    def test_trivial_field(self, square2):
        assert partition_ratio_exact(square2, None, DisorderField.zero(square2), T=2.0) == 1.0


class TestPartitionExpansion:
    def test_box1(self, box1):
        T = 2.0
        without = enumerate_model("ising", box1, T=T)
        sigmas = without.spin_configurations()
        for seed in range(5):
            field = sample_field(box1, 100 + seed, 0.9)
            z = partition_ratio_exact(box1, BoundaryCondition.free(), field, T=T)
            W = sigmas @ field.scaled / T
            assert 1.0 / z == pytest.approx(without.expectation(np.exp(W)), rel=1e-10)
            expansion = np.prod(1.0 + sigmas * np.tanh(field.scaled / T), axis=1)
            assert p0_margin(field, T, z) == pytest.approx(without.expectation(expansion) - 1.0, abs=1e-10)


class TestTotalVariation:
    def test_identical(self, square2):
        a = enumerate_model("ising", square2, T=2.0)
        assert exact_tv(a, a) == 0.0

    def test_incompatible(self, square2, box1):
        with pytest.raises(IncompatibleDistributionsError):
            exact_tv(enumerate_model("ising", square2, T=2.0), enumerate_model("fk", square2, T=2.0))
        with pytest.raises(IncompatibleDistributionsError):
            exact_tv(enumerate_model("ising", square2, T=2.0), enumerate_model("ising", box1, T=2.0))

    def test_field_strength_direction(self):
        """弱外场几乎不改变分布，强外场几乎使其奇异（5×4 矩形，无序中位数）"""
        graph = build_rectangle(5, 4)
        T = 0.5
        weak, strong = [], []
        without = enumerate_model("ising", graph, T=T)
        for seed in range(32):
            h = sample_field(graph, seed)
            weak.append(exact_tv(enumerate_model("ising", graph, T=T, field=h.with_epsilon(0.01)), without))
            strong.append(exact_tv(enumerate_model("ising", graph, T=T, field=h.with_epsilon(3.0)), without))
        assert np.median(weak) < 0.1
        assert np.median(strong) > 0.9

    def test_monotone_single_field(self, box1):
        without = enumerate_model("ising", box1, T=2.0)
        h = sample_field(box1, 11)
        tvs = [
            exact_tv(enumerate_model("ising", box1, T=2.0, field=h.with_epsilon(eps)), without)
            for eps in (0.0, 0.1, 0.5)
        ]
        assert tvs[0] == 0.0
        assert 0.0 < tvs[1] < tvs[2] <= 1.0


class TestProduct:
    def test_two_sites(self):
        tv = check_product_tv_bound([0.38], 2)
        assert tv >= 0.38 - 1e-12
        assert tv == pytest.approx(product_tv([(np.array([0.69, 0.31]), np.array([0.31, 0.69]))] * 2))

    def test_single_component(self):
        assert check_product_tv_bound([0.2], 1) == pytest.approx(0.2)

    def test_invalid(self):
        with pytest.raises(InvalidParameterError):
            check_product_tv_bound([0.1, 0.2], 3)
        with pytest.raises(InvalidParameterError):
            product_tv([(np.array([0.5, 0.6]), np.array([0.5, 0.5]))])

    def test_single_site_tv(self):
        assert single_site_tv(0.0, 0.0) == 0.0
        assert single_site_tv(10.0, -10.0) == pytest.approx(1.0)

    def test_sublattice_bounds(self):
        graph = build_box(2)
        rng = np.random.default_rng(3)
        for seed in range(5):
            field = sample_field(graph, seed, 0.5)
            sigma = rng.choice([-1, 1], size=graph.num_vertices)
            result = sublattice_conditional_tv(graph, sigma, 2.0, BoundaryCondition.plus(graph), field)
            assert len(result.sites) == 9
            assert result.bounds_hold
            assert result.product_tv >= result.site_tvs.max() - 1e-12

    def test_lower_bound_formula(self):
        assert single_site_tv_lower_bound(0.0, 2.0) == 0.0
        assert single_site_tv_lower_bound(1.0, 2.0) == pytest.approx(0.25 * math.exp(-5.0))
