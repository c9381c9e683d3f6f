"""
较长时间的统计验收

固定种子；可用 pytest -m "not slow" 跳过。
"""

import numpy as np
import pytest

from rffkim.clusters import decompose, well_connected
from rffkim.core.constants import P_C, temperature_from_p
from rffkim.disorder import DisorderField, sample_field
from rffkim.estimators import estimate_tv
from rffkim.exact import enumerate_model, exact_tv
from rffkim.lattice import BoundaryCondition, build_box, build_rectangle
from rffkim.mcmc import ChainPlan, ModelSpec, batch_means_error, collect_samples, heatbath_sweep, initial_state

pytestmark = pytest.mark.slow


def _fk_samples(N, p, boundary, plan):
    graph = build_box(N)
    spec = ModelSpec(graph, "rffk", temperature_from_p(p), boundary)
    return graph, collect_samples(plan, spec, DisorderField.zero(graph))


class TestOffCriticalClusters:
    def test_subcritical_max_cluster(self):
        N = 32
        _, samples = _fk_samples(N, 0.3, BoundaryCondition.free(), ChainPlan(burn_in=20, thin=2, samples=50, replicas=4, seed=3))
        assert len(samples) == 200
        large = np.mean([s.stats.max_size >= N**0.9 for s in samples])
        assert large < 0.01

    def test_supercritical_boundary_cluster(self):
        graph, samples = _fk_samples(
            32, 0.9, BoundaryCondition.wired(), ChainPlan(burn_in=20, thin=2, samples=50, replicas=4, seed=5)
        )
        assert len(samples) == 200
        wired = BoundaryCondition.wired()
        hits = 0
        for s in samples:
            decomp = decompose(s.omega, graph, wired)
            contains = (decomp.labels[graph.interior_boundary] == decomp.boundary_label).all()
            hits += bool(contains and decomp.boundary_label == decomp.maximal_label)
        assert hits >= 0.95 * len(samples)

    def test_supercritical_well_connected(self):
        graph, samples = _fk_samples(
            32, 0.9, BoundaryCondition.wired(), ChainPlan(burn_in=30, thin=1, samples=1, replicas=100, seed=11)
        )
        assert len(samples) == 100
        hits = sum(well_connected(s.omega, graph, 4).well_connected for s in samples)
        assert hits >= 95


class TestErgodicity:
    def test_plus_and_minus_starts_agree(self):
        graph = build_box(3)
        field = sample_field(graph, 2, 0.3)
        spec = ModelSpec(graph, "rfim", 3.0, BoundaryCondition.zero(graph))
        means = []
        for start, replica in ((1, 0), (-1, 1)):
            state = initial_state(spec, field, seed=17, replica=replica)
            state.sigma[:] = start
            trace = []
            for sweep in range(4200):
                heatbath_sweep(state)
                if sweep >= 200:
                    trace.append(state.magnetization())
            trace = np.asarray(trace)
            means.append((trace.mean(), batch_means_error(trace, n_batches=20)))
        (m_plus, se_plus), (m_minus, se_minus) = means
        assert abs(m_plus - m_minus) <= 3 * np.hypot(se_plus, se_minus)


class TestTotalVariationConsistency:
    @pytest.mark.parametrize(
        "kind, model, graph, T, boundary",
        [
            ("rfim", "ising", build_box(1), 2.0, "zero"),
            ("rffk", "fk", build_rectangle(2, 2), temperature_from_p(P_C), "free"),
        ],
        ids=["ising-box1", "fk-2x2"],
    )
    def test_estimate_matches_enumeration(self, kind, model, graph, T, boundary):
        gamma = BoundaryCondition.from_name(boundary, graph)
        spec = ModelSpec(graph, kind, T, gamma)
        rng = np.random.default_rng(2024)
        agree = 0
        for trial in range(20):
            field = sample_field(graph, int(rng.integers(0, 2**32)), float(rng.uniform(0.2, 1.2)))
            exact = exact_tv(
                enumerate_model(model, graph, T=T, boundary=gamma, field=field),
                enumerate_model(model, graph, T=T, boundary=gamma, field=field.with_epsilon(0.0)),
            )
            tv, _ = estimate_tv(field, spec, ChainPlan(burn_in=100, samples=2000, replicas=4, seed=trial))
            agree += tv.agrees_with(exact, k=3.0)
        assert agree >= 18
