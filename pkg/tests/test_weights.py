"""Weight-model construction, sampling, scaling, and serialization tests."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import kstest

from degreenet.errors import DomainError, ModelInvalidError
from degreenet.specfun import power_sum
from degreenet.weights import (
    BoundedParetoModel,
    EnvelopeModel,
    PointMassModel,
    PowerLawModel,
    ScalingMap,
    SmoothDensityModel,
    WeightVector,
    apply_scaling,
    materialize_power_law,
    model_from_dict,
    model_from_json,
    model_to_dict,
    model_to_json,
    sample_bounded_pareto,
    sample_from_density,
    smooth_density_from_poly,
    uniform_density,
)


class TestWeightVector:
    def test_bounds_enforced(self):
        with pytest.raises(ModelInvalidError):
            WeightVector(values=np.array([0.5, 1.2]), model_tag="x")
        with pytest.raises(ModelInvalidError):
            WeightVector(values=np.array([0.5]), model_tag="x")

    def test_immutable(self):
        w = WeightVector(values=np.array([0.2, 0.4]), model_tag="x")
        with pytest.raises(ValueError):
            w.values[0] = 0.9

    def test_sorted_view_preserves_storage(self):
        w = WeightVector(values=np.array([0.1, 0.9, 0.5]), model_tag="x")
        assert list(w.sorted_descending()) == [0.9, 0.5, 0.1]
        assert list(w.values) == [0.1, 0.9, 0.5]

    def test_norms(self):
        w = WeightVector(values=np.array([0.3, 0.4]), model_tag="x")
        assert w.norm1() == pytest.approx(0.7)
        assert w.norm2_sq() == pytest.approx(0.25)


class TestPowerLaw:
    def test_direct_formula(self):
        w = materialize_power_law(PowerLawModel(gamma=0.5, theta_n=1.0), 4)
        assert w.values == pytest.approx([1.0, 2**-0.5, 3**-0.5, 0.5])

    def test_trivial_envelope_matches_plain(self):
        plain = materialize_power_law(PowerLawModel(gamma=0.3, theta_n=0.8), 50)
        env = EnvelopeModel(
            gamma=0.3, theta_n=0.8,
            xi_grid=np.array([0.01, 1.0]), xi_values=np.array([1.0, 1.0]),
            xi_min=0.5, xi_max=2.0,
        )
        assert np.array_equal(materialize_power_law(env, 50).values, plain.values)

    def test_norm_matches_power_sum(self):
        w = materialize_power_law(PowerLawModel(gamma=0.3, theta_n=1.0), 1000)
        exact, _ = power_sum(1000, 0.3)
        assert w.norm1() == pytest.approx(exact, rel=1e-12)

    def test_nonincreasing(self):
        w = materialize_power_law(PowerLawModel(gamma=0.7, theta_n=1.0), 100)
        assert np.all(np.diff(w.values) <= 0)

    def test_envelope_exceeding_one_rejected(self):
        env = EnvelopeModel(
            gamma=0.5, theta_n=1.0,
            xi_grid=np.array([0.01, 1.0]), xi_values=np.array([2.0, 2.0]),
            xi_min=1.0, xi_max=3.0,
        )
        with pytest.raises(ModelInvalidError):
            materialize_power_law(env, 10)

    def test_xi_domain(self):
        env = EnvelopeModel(
            gamma=0.5, theta_n=0.4,
            xi_grid=np.array([0.5, 1.0]), xi_values=np.array([1.0, 1.5]),
            xi_min=0.5, xi_max=2.0,
        )
        with pytest.raises(DomainError):
            env.xi(0.0)
        with pytest.raises(DomainError):
            env.xi(1.1)

    def test_gamma_range(self):
        with pytest.raises(ModelInvalidError):
            PowerLawModel(gamma=1.0, theta_n=0.5)
        with pytest.raises(ModelInvalidError):
            PowerLawModel(gamma=0.5, theta_n=1.5)


class TestBoundedPareto:
    def test_normalizer_auto(self):
        m = BoundedParetoModel(beta=3.0, a=1.0 / 3.0, b=1.0)
        assert m.c == pytest.approx(0.25, rel=1e-12)
        assert m.mean() == pytest.approx(0.5, rel=1e-12)

    def test_normalizer_validated(self):
        with pytest.raises(ModelInvalidError):
            BoundedParetoModel(beta=3.0, a=1.0 / 3.0, b=1.0, c=0.3)

    def test_invariants(self):
        with pytest.raises(ModelInvalidError):
            BoundedParetoModel(beta=1.0, a=0.0, b=1.0)  # a>0 needed for beta>=1
        with pytest.raises(ModelInvalidError):
            BoundedParetoModel(beta=0.5, a=0.7, b=0.3)

    def test_uniform_case_beta0(self):
        m = BoundedParetoModel(beta=0.0, a=0.2, b=0.8)
        w = sample_bounded_pareto(m, 50_000, seed=3)
        se = math.sqrt(m.variance() / 50_000)
        assert abs(w.values.mean() - 0.5) < 3 * se
        assert np.all((w.values >= 0.2) & (w.values < 0.8))

    def test_beta3_mean_half(self):
        m = BoundedParetoModel(beta=3.0, a=1.0 / 3.0, b=1.0)
        w = sample_bounded_pareto(m, 50_000, seed=11)
        se = math.sqrt(m.variance() / 50_000)
        assert abs(w.values.mean() - 0.5) < 3 * se

    def test_beta1_log_branch_ks(self):
        m = BoundedParetoModel(beta=1.0, a=0.1, b=0.9)
        w = sample_bounded_pareto(m, 20_000, seed=5)
        stat = kstest(w.values, m.cdf).statistic
        assert stat < 0.012  # ~1.36/sqrt(20000) with headroom

    def test_inverse_cdf_round_trip(self):
        for beta in (0.0, 1.0, 2.5):
            m = BoundedParetoModel(beta=beta, a=0.2, b=0.9)
            u = np.linspace(0.0, 1.0, 101)
            assert m.cdf(m.inverse_cdf(u)) == pytest.approx(u, abs=1e-10)

    def test_seed_reproducibility(self):
        m = BoundedParetoModel(beta=2.0, a=0.1, b=1.0)
        w1 = sample_bounded_pareto(m, 100, seed=9)
        w2 = sample_bounded_pareto(m, 100, seed=9)
        assert np.array_equal(w1.values, w2.values)

    def test_ordered_means_approach_quantiles(self):
        # E(pi_(i)) -> F^{-1}(i/n) at fixed i/n as n grows
        m = BoundedParetoModel(beta=2.0, a=0.2, b=1.0)
        frac = 0.3
        errs = []
        for n in (50, 500):
            means = np.zeros(n)
            for r in range(200):
                w = sample_bounded_pareto(m, n, seed=1000 + r)
                means += np.sort(w.values)[::-1]
            means /= 200
            i = int(frac * n)
            # descending order statistic i corresponds to upper quantile
            q = m.inverse_cdf(1.0 - frac)
            errs.append(abs(means[i] - q))
        assert errs[1] < errs[0]


class TestSmoothDensity:
    def test_uniform(self):
        u = uniform_density()
        assert u.mu == pytest.approx(0.5)
        assert u.sigma2 == pytest.approx(1.0 / 12.0)
        assert u.curvature_constant == 0.0

    def test_poly_moments(self):
        m = smooth_density_from_poly([1.0, 1.0])  # f(t) = (2/3)(1 + t)
        assert m.f(0.0) == pytest.approx(2.0 / 3.0)
        assert m.mu == pytest.approx(5.0 / 9.0)

    def test_inconsistent_moments_rejected(self):
        with pytest.raises(ModelInvalidError):
            SmoothDensityModel(f=lambda t: 1.0, f_second_deriv_sup=0.0,
                               mu=0.4, sigma2=1.0 / 12.0)

    def test_non_density_rejected(self):
        with pytest.raises(ModelInvalidError):
            SmoothDensityModel(f=lambda t: 2.0, f_second_deriv_sup=0.0,
                               mu=0.5, sigma2=1.0 / 12.0)

    def test_negative_poly_rejected(self):
        with pytest.raises(ModelInvalidError):
            smooth_density_from_poly([0.0, 1.0, -1.5])

    def test_sample_from_density_moments(self):
        m = smooth_density_from_poly([1.0, 2.0])
        w = sample_from_density(m, 50_000, seed=21)
        assert abs(w.values.mean() - m.mu) < 3 * math.sqrt(m.sigma2 / 50_000)

    def test_point_mass(self):
        w = sample_from_density(PointMassModel(value=0.3), 10, seed=0)
        assert np.all(w.values == 0.3)


class TestScalingMap:
    def test_identity(self):
        w = WeightVector(values=np.array([0.2, 0.7, 0.4]), model_tag="x")
        out = apply_scaling(w, ScalingMap(gamma=0.0, zeta=1.0), 3)
        assert np.array_equal(out.values, w.values)

    def test_homogeneous_offset(self):
        w = WeightVector(values=np.zeros(4), model_tag="x")
        n = 100
        p = 0.04
        sm = ScalingMap(gamma=0.0, zeta=0.0, gamma_prime=0.5,
                        zeta_prime=p * n)
        out = apply_scaling(w, sm, n)
        assert out.values == pytest.approx(np.full(4, math.sqrt(p)))

    def test_sparse_bound(self):
        rng = np.random.Generator(np.random.Philox(17))
        w = WeightVector(values=rng.random(1000), model_tag="x")
        out = apply_scaling(w, ScalingMap(gamma=0.5, zeta=4.0), 10**6)
        assert np.all(out.values <= 2e-3 + 1e-15)
        # none clamped
        assert np.all(out.values < 1.0)

    def test_clamp_applied_last(self):
        w = WeightVector(values=np.array([0.9, 0.1]), model_tag="x")
        out = apply_scaling(w, ScalingMap(gamma=0.0, zeta=9.0), 2)
        assert out.values[0] == 1.0
        assert out.values[1] == pytest.approx(0.3)

    def test_negative_rejected(self):
        with pytest.raises(ModelInvalidError):
            ScalingMap(gamma=-0.1)


class TestSerialization:
    @pytest.mark.parametrize("model", [
        PowerLawModel(gamma=0.4, theta_n=0.9),
        BoundedParetoModel(beta=3.0, a=1.0 / 3.0, b=1.0),
        PointMassModel(value=0.25),
    ])
    def test_round_trip(self, model):
        again = model_from_json(model_to_json(model))
        assert model_to_dict(again) == model_to_dict(model)

    def test_envelope_round_trip(self):
        env = EnvelopeModel(
            gamma=0.3, theta_n=0.5,
            xi_grid=np.array([0.1, 0.6, 1.0]),
            xi_values=np.array([1.0, 1.3, 0.9]),
            xi_min=0.5, xi_max=2.0,
        )
        again = model_from_json(model_to_json(env))
        assert np.array_equal(again.xi_grid, env.xi_grid)
        assert np.array_equal(again.xi_values, env.xi_values)

    def test_smooth_poly_round_trip(self):
        m = smooth_density_from_poly([1.0, 2.0, 1.0])
        again = model_from_json(model_to_json(m))
        assert again.mu == pytest.approx(m.mu, rel=1e-14)
        assert again.poly_coeffs == pytest.approx(m.poly_coeffs)

    def test_unknown_kind(self):
        with pytest.raises(ModelInvalidError):
            model_from_dict({"kind": "mystery"})

    @given(st.floats(0.05, 0.95), st.floats(0.0, 1.0))
    def test_power_law_round_trip_any_params(self, gamma, theta):
        m = PowerLawModel(gamma=gamma, theta_n=theta)
        again = model_from_json(model_to_json(m))
        assert again == m
