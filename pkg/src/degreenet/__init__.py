"""Degree-based random network models: exact and asymptotic degree
distributions under multiplicative Bernoulli edge models, graph and weight
samplers across sparsity regimes, and degree-based moment estimation."""

__version__ = "0.1.0"

from .degree_laws import (
    ConditionalMoments,
    DegreeLaw,
    MarginalMoments,
    conditional_degree_law,
    conditional_moments,
    extreme_sparse_pmf,
    marginal_moments,
    marginal_pmf_quadrature,
    pareto_population_pmf,
    poisson_binomial_pmf,
    smooth_repro_pmf,
    sparse_pmf,
    tv_distance_to_poisson,
)
from .errors import DegreeNetError
from .estimate import EstimateReport, clt_report, fit_exponent, p_hat, pi_hat
from .sampler import (
    GraphSample,
    sample_graph,
    sample_graph_sparse,
    sample_population,
)
from .specfun import (
    SurvivalBounds,
    binom_survival,
    iota,
    reg_inc_beta,
    reg_inc_gamma_lower,
    rho,
    survival_bounds,
)
from .weights import (
    BoundedParetoModel,
    EnvelopeModel,
    PointMassModel,
    PowerLawModel,
    ScalingMap,
    SmoothDensityModel,
    WeightVector,
    apply_scaling,
    materialize_power_law,
    model_from_json,
    model_to_json,
    sample_bounded_pareto,
    smooth_density_from_poly,
    uniform_density,
)

__all__ = [
    "__version__",
    "BoundedParetoModel",
    "ConditionalMoments",
    "DegreeLaw",
    "DegreeNetError",
    "EnvelopeModel",
    "EstimateReport",
    "GraphSample",
    "MarginalMoments",
    "PointMassModel",
    "PowerLawModel",
    "ScalingMap",
    "SmoothDensityModel",
    "SurvivalBounds",
    "WeightVector",
    "apply_scaling",
    "binom_survival",
    "clt_report",
    "conditional_degree_law",
    "conditional_moments",
    "extreme_sparse_pmf",
    "fit_exponent",
    "iota",
    "marginal_moments",
    "marginal_pmf_quadrature",
    "materialize_power_law",
    "model_from_json",
    "model_to_json",
    "p_hat",
    "pareto_population_pmf",
    "pi_hat",
    "poisson_binomial_pmf",
    "reg_inc_beta",
    "reg_inc_gamma_lower",
    "rho",
    "sample_bounded_pareto",
    "sample_graph",
    "sample_graph_sparse",
    "sample_population",
    "smooth_density_from_poly",
    "smooth_repro_pmf",
    "sparse_pmf",
    "survival_bounds",
    "tv_distance_to_poisson",
    "uniform_density",
]
