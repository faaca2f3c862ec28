"""Sampler tests: distributional correctness, reproducibility, and the
dense/sparse equivalence battery."""

import math
import os

import numpy as np
import pytest
from scipy.stats import chi2

from degreenet.degree_laws import conditional_degree_law, conditional_mean
from degreenet.errors import DomainError, MemoryBudgetError
from degreenet.sampler import (
    THREADS_ENV_VAR,
    GraphSample,
    draw_weights,
    pooled_degree_histogram,
    sample_graph,
    sample_graph_sparse,
    sample_population,
)
from degreenet.verify import CHI2_ALPHA
from degreenet.weights import (
    BoundedParetoModel,
    PointMassModel,
    PowerLawModel,
    ScalingMap,
    WeightVector,
    materialize_power_law,
)


def _chi2_reject(obs_a, obs_b):
    """Two-sample chi-square homogeneity test at the pinned alpha."""
    keep = (obs_a + obs_b) >= 5
    a, b = obs_a[keep].astype(float), obs_b[keep].astype(float)
    na, nb = a.sum(), b.sum()
    expected_a = (a + b) * na / (na + nb)
    expected_b = (a + b) * nb / (na + nb)
    stat = ((a - expected_a) ** 2 / expected_a).sum() + (
        (b - expected_b) ** 2 / expected_b
    ).sum()
    dof = keep.sum() - 1
    return stat > chi2.ppf(1 - CHI2_ALPHA, dof)


class TestSampleGraph:
    def test_complete_two_node(self):
        w = WeightVector(values=np.array([1.0, 1.0]), model_tag="x")
        s = sample_graph(w, seed=1, store_edges=True)
        assert list(s.degrees) == [1, 1]
        assert s.edge_count == 1
        assert s.edges.tolist() == [[0, 1]]

    def test_handshake_invariant(self):
        w = materialize_power_law(PowerLawModel(gamma=0.4, theta_n=1.0), 60)
        for r in range(20):
            s = sample_graph(w, seed=3, replicate_id=r)
            assert s.degrees.sum() == 2 * s.edge_count

    def test_handshake_enforced(self):
        with pytest.raises(DomainError):
            GraphSample(degrees=np.array([1, 2]), edge_count=3, seed=0,
                        replicate_id=0)

    def test_reproducible(self):
        w = materialize_power_law(PowerLawModel(gamma=0.5, theta_n=1.0), 40)
        s1 = sample_graph(w, seed=77, replicate_id=3, store_edges=True)
        s2 = sample_graph(w, seed=77, replicate_id=3, store_edges=True)
        assert np.array_equal(s1.degrees, s2.degrees)
        assert np.array_equal(s1.edges, s2.edges)
        s3 = sample_graph(w, seed=77, replicate_id=4)
        assert not np.array_equal(s1.degrees, s3.degrees)

    def test_erdos_renyi_mean_degree(self):
        p = 0.05
        n = 200
        w = WeightVector(values=np.full(n, math.sqrt(p)), model_tag="h")
        reps = 300
        total = 0.0
        for r in range(reps):
            total += sample_graph(w, seed=5, replicate_id=r).degrees.mean()
        se = math.sqrt((n - 1) * p * (1 - p) / (reps * n))
        assert abs(total / reps - (n - 1) * p) < 3 * se

    def test_power_law_mean_matches_formula(self):
        w = materialize_power_law(PowerLawModel(gamma=0.5, theta_n=1.0), 1000)
        reps = 400
        d1 = [sample_graph(w, seed=8, replicate_id=r).degrees[0] for r in range(reps)]
        target = conditional_mean(w, 0)
        se = math.sqrt(np.var(d1) / reps)
        assert abs(np.mean(d1) - target) < 3 * se

    def test_memory_budget(self):
        w = WeightVector(values=np.full(20_000, 1.0), model_tag="x")
        with pytest.raises(MemoryBudgetError):
            sample_graph(w, seed=1, store_edges=True)


class TestSparseSampler:
    def test_empty_weights(self):
        w = WeightVector(values=np.zeros(50), model_tag="x")
        s = sample_graph_sparse(w, seed=1)
        assert s.edge_count == 0
        assert np.all(s.degrees == 0)

    def test_degrees_track_input_order(self):
        # strongly unequal unsorted weights: heaviest entry should collect
        # the largest average degree at its original position
        vals = np.array([0.05, 0.9, 0.1, 0.5, 0.02])
        w = WeightVector(values=vals, model_tag="x")
        totals = np.zeros(5)
        for r in range(2000):
            totals += sample_graph_sparse(w, seed=12, replicate_id=r).degrees
        expected = [vals[i] * (vals.sum() - vals[i]) for i in range(5)]
        assert totals.argmax() == np.argmax(expected) == 1
        assert totals / 2000 == pytest.approx(expected, abs=0.05)

    def test_edges_well_formed(self):
        w = materialize_power_law(PowerLawModel(gamma=0.3, theta_n=0.9), 30)
        s = sample_graph_sparse(w, seed=4, store_edges=True)
        assert s.edges.shape == (s.edge_count, 2)
        assert np.all(s.edges[:, 0] < s.edges[:, 1])
        pairs = {tuple(e) for e in s.edges.tolist()}
        assert len(pairs) == s.edge_count  # no duplicates

    def test_chi_square_equivalence_with_dense(self):
        w = materialize_power_law(PowerLawModel(gamma=0.5, theta_n=1.0), 100)
        reps = 8000
        hist_dense = np.zeros(100, dtype=np.int64)
        hist_sparse = np.zeros(100, dtype=np.int64)
        for r in range(reps):
            hist_dense[sample_graph(w, seed=101, replicate_id=r).degrees[0]] += 1
            hist_sparse[sample_graph_sparse(w, seed=202, replicate_id=r).degrees[0]] += 1
        assert not _chi2_reject(hist_dense, hist_sparse)


class TestPopulation:
    def test_single_replicate_reduces_to_sample_graph(self):
        w = materialize_power_law(PowerLawModel(gamma=0.4, theta_n=1.0), 25)
        pop = list(sample_population(w, None, 25, 1, master_seed=55))
        direct = sample_graph(w, seed=55, replicate_id=0)
        assert np.array_equal(pop[0].degrees, direct.degrees)

    def test_point_mass_histogram_matches_conditional_law(self):
        n = 40
        model = PointMassModel(value=0.4)
        w = draw_weights(model, n, seed=0)
        law = conditional_degree_law(w, 0)
        reps = 6000
        obs = np.zeros(n, dtype=np.int64)
        for s in sample_population(model, None, n, reps, master_seed=9):
            obs[s.degrees[0]] += 1
        expected = law.pmf * reps
        keep = expected >= 5
        stat = ((obs[keep] - expected[keep]) ** 2 / expected[keep]).sum()
        assert stat < chi2.ppf(1 - CHI2_ALPHA, keep.sum() - 1)

    def test_thread_count_invariance(self):
        model = BoundedParetoModel(beta=2.0, a=0.2, b=0.9)
        runs = {}
        for threads in ("1", "4"):
            os.environ[THREADS_ENV_VAR] = threads
            try:
                runs[threads] = [
                    s.degrees.copy()
                    for s in sample_population(model, None, 50, 8, master_seed=31)
                ]
            finally:
                del os.environ[THREADS_ENV_VAR]
        for a, b in zip(runs["1"], runs["4"]):
            assert np.array_equal(a, b)

    def test_fresh_weights_per_replicate(self):
        model = BoundedParetoModel(beta=2.0, a=0.2, b=0.9)
        w0 = draw_weights(model, 20, seed=1)
        w1 = draw_weights(model, 20, seed=2)
        assert not np.array_equal(w0.values, w1.values)

    def test_scaling_applied(self):
        model = PointMassModel(value=1.0)
        sm = ScalingMap(gamma=0.5, zeta=1.0)
        samples = list(sample_population(model, sm, 100, 3, master_seed=77))
        # scaled weights are 0.1, so degrees stay far below n-1
        assert max(s.degrees.max() for s in samples) < 20

    def test_norm_concentration(self):
        w = materialize_power_law(PowerLawModel(gamma=0.3, theta_n=1.0), 300)
        target = w.norm1() ** 2 - w.norm2_sq()
        reps = 200
        totals = [s.degrees.sum() for s in sample_population(w, None, 300, reps, 13)]
        se = np.std(totals) / math.sqrt(reps)
        assert abs(np.mean(totals) - target) < 3 * se

    def test_pooled_histogram(self):
        w = materialize_power_law(PowerLawModel(gamma=0.5, theta_n=1.0), 30)
        hist = pooled_degree_histogram(
            sample_population(w, None, 30, 10, master_seed=3), 30
        )
        assert hist.sum() == 10 * 30

    def test_replicates_validation(self):
        w = materialize_power_law(PowerLawModel(gamma=0.5, theta_n=1.0), 10)
        with pytest.raises(DomainError):
            list(sample_population(w, None, 10, 0, master_seed=1))
