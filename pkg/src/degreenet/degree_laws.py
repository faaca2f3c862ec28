"""Exact and approximate degree distributions for the multiplicative
Bernoulli edge model, together with the conditional and marginal moment
formulas and the total-variation Poisson comparison.

Exact Poisson-Binomial pmfs use O(m^2) sequential convolution; the
combinatorial enumeration formula is retained only as a test oracle.
Mixture pmfs integrate the Binomial kernel against the mixing density by
adaptive quadrature with a forced panel split at the kernel mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .errors import DegenerateError, DomainError, QuadratureError, RegimeError, KMaxTooSmallError
from .specfun import (
    _phi,
    binom_survival_all,
    iota_all,
    reg_inc_beta,
    reg_inc_gamma_lower,
    rho,
)
from .weights import (
    BoundedParetoModel,
    PointMassModel,
    ScalingMap,
    SmoothDensityModel,
    WeightVector,
)

# Provenance tags
EXACT_DP = "exact_dp"
QUADRATURE = "quadrature"
PARETO_CLOSED_FORM = "pareto_closed_form"
SMOOTH_REPRO = "smooth_repro"
SPARSE_BETA = "sparse_beta"
SPARSE_GAMMA = "sparse_gamma"
EXTREME_LIMIT = "extreme_limit"

_QUAD_EPSABS = 1e-13
_QUAD_EPSREL = 1e-10
_QUAD_LIMIT = 200
_POISSON_REF_TAIL = 1e-14
_EXTREME_TAIL_TOL = 1e-12

MixingModel = Union[BoundedParetoModel, SmoothDensityModel, PointMassModel]


@dataclass(frozen=True)
class DegreeLaw:
    """A pmf over degrees with provenance and attached moment summaries.

    The pmf covers k = 0..len(pmf)-1; for limiting or sparse laws this may
    be a truncated range smaller than n.
    """

    pmf: np.ndarray
    provenance: str
    n: int
    mean: float
    variance: float
    extras: dict = field(default_factory=dict)

    @classmethod
    def from_pmf(cls, pmf: np.ndarray, provenance: str, n: int, **extras) -> "DegreeLaw":
        pmf = np.asarray(pmf, dtype=float)
        k = np.arange(pmf.size, dtype=float)
        mean = float(np.dot(k, pmf))
        variance = float(np.dot(k * k, pmf)) - mean * mean
        pmf = pmf.copy()
        pmf.setflags(write=False)
        return cls(pmf=pmf, provenance=provenance, n=n, mean=mean,
                   variance=variance, extras=extras)

    @property
    def dispersion(self) -> float:
        if self.mean <= 0.0:
            raise DegenerateError("dispersion undefined for zero-mean law")
        return self.variance / self.mean


@dataclass(frozen=True)
class ConditionalMoments:
    """Moments of one degree given the weight vector (under-dispersed)."""

    mean: float
    variance: float
    dispersion: float
    disp_gap_lower: float
    disp_gap_upper: float


@dataclass(frozen=True)
class MarginalMoments:
    """Moments of any degree when the weights are an i.i.d. sample."""

    mean: float
    variance: float
    covariance: float
    dispersion: float
    correlation: float


def poisson_binomial_pmf(probs: np.ndarray) -> DegreeLaw:
    """Exact Poisson-Binomial pmf over {0..m} by sequential convolution."""
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1 or probs.size < 1:
        raise DomainError("need at least one success probability")
    if np.any(probs < 0.0) or np.any(probs > 1.0):
        raise DomainError("success probabilities must lie in [0, 1]")
    m = probs.size
    pmf = np.zeros(m + 1)
    pmf[0] = 1.0
    for idx, p in enumerate(probs):
        q = 1.0 - p
        hi = idx + 2  # active prefix length after this trial
        pmf[1:hi] = pmf[1:hi] * q + pmf[: hi - 1] * p
        pmf[0] *= q
    return DegreeLaw.from_pmf(pmf, EXACT_DP, n=m + 1)


def conditional_degree_law(pi: WeightVector, i: int) -> DegreeLaw:
    """Exact law of degree i given the weight vector."""
    if not 0 <= i < pi.n:
        raise DomainError(f"index {i} out of range for n={pi.n}")
    probs = pi.values[i] * np.delete(pi.values, i)
    law = poisson_binomial_pmf(probs)
    return DegreeLaw(pmf=law.pmf, provenance=EXACT_DP, n=pi.n,
                     mean=law.mean, variance=law.variance, extras={"node": i})


def conditional_mean(pi: WeightVector, i: int) -> float:
    """E(d_i | pi) = pi_i (||pi||_1 - pi_i)."""
    return float(pi.values[i] * (pi.norm1() - pi.values[i]))


def conditional_variance(pi: WeightVector, i: int) -> float:
    """var(d_i | pi) = E(d_i | pi) - pi_i^2 (||pi||_2^2 - pi_i^2)."""
    v = pi.values[i]
    return conditional_mean(pi, i) - v * v * (pi.norm2_sq() - v * v)


def conditional_covariance(pi: WeightVector, i: int, j: int) -> float:
    """cov(d_i, d_j | pi) = pi_i pi_j (1 - pi_i pi_j), at most 1/4."""
    if i == j:
        raise DomainError("covariance requires distinct indices")
    p = pi.values[i] * pi.values[j]
    return float(p * (1.0 - p))


def conditional_moments(pi: WeightVector, i: int) -> ConditionalMoments:
    """Mean, variance, dispersion, and the dispersion-gap sandwich for d_i."""
    v = float(pi.values[i])
    rest1 = pi.norm1() - v
    if rest1 <= 0.0:
        raise DegenerateError("isolated node: dispersion undefined")
    mean = v * rest1
    rest2 = pi.norm2_sq() - v * v
    variance = mean - v * v * rest2
    dispersion = 1.0 - v * rest2 / rest1
    return ConditionalMoments(
        mean=mean,
        variance=variance,
        dispersion=dispersion,
        disp_gap_lower=mean / (pi.n - 1),
        disp_gap_upper=v,
    )


def marginal_moments(mu: float, sigma2: float, n: int) -> MarginalMoments:
    """Marginal degree moments when weights are an i.i.d. F(mu, sigma2) sample."""
    if n < 3:
        raise DomainError("covariance and correlation require n >= 3")
    if sigma2 < 0.0 or sigma2 > mu * (1.0 - mu):
        raise DomainError(
            f"sigma2={sigma2} incompatible with a law on [0,1] with mean {mu}"
        )
    mean = (n - 1) * mu * mu
    variance = (n - 1) * mean * (sigma2 + (1.0 - (mu * mu + sigma2)) / (n - 1))
    covariance = mean * (
        3.0 * (n - 2) / (n - 1) * sigma2 + (1.0 - (mu * mu + sigma2)) / (n - 1)
    )
    dispersion = (n - 2) * sigma2 + 1.0 - mu * mu
    correlation = (1.0 / (n - 1)) * (
        1.0 + 2.0 * (n - 2.5) * sigma2 / ((n - 2) * sigma2 + 1.0 - mu * mu)
    )
    return MarginalMoments(mean=mean, variance=variance, covariance=covariance,
                           dispersion=dispersion, correlation=correlation)


# ---------------------------------------------------------------------------
# Quadrature for Binomial mixtures
# ---------------------------------------------------------------------------

def _log_binom_kernel(t: float, k: int, n: int) -> float:
    """log g_n(t, k) for the Binomial(n-1, t) kernel."""
    if t <= 0.0:
        return 0.0 if k == 0 else -math.inf
    if t >= 1.0:
        return 0.0 if k == n - 1 else -math.inf
    return (
        math.lgamma(n)
        - math.lgamma(k + 1)
        - math.lgamma(n - k)
        + k * math.log(t)
        + (n - 1 - k) * math.log1p(-t)
    )


def _mixture_entry(k: int, n: int, mu: float, density, lo: float, hi: float) -> float:
    """P(d = k) = int_lo^hi g_n(mu s, k) density(s) ds, with the integrand
    rescaled by its log maximum so deeply censored entries keep relative
    accuracy."""

    def log_integrand(s: float) -> float:
        d = density(s)
        if d <= 0.0:
            return -math.inf
        return _log_binom_kernel(mu * s, k, n) + math.log(d)

    mode = k / ((n - 1) * mu) if k > 0 else lo
    probe = np.linspace(lo, hi, 65).tolist()
    if lo < mode < hi:
        probe.append(mode)
    log_max = max(log_integrand(s) for s in probe)
    if log_max == -math.inf:
        return 0.0

    def integrand(s: float) -> float:
        v = log_integrand(s) - log_max
        return math.exp(v) if v > -745.0 else 0.0

    points = [mode] if lo < mode < hi else None
    val, err = quad(integrand, lo, hi, points=points,
                    epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, limit=_QUAD_LIMIT)
    if err > max(_QUAD_EPSABS, 1e-8 * abs(val)) * 10.0 and err > 1e-10 * abs(val):
        raise QuadratureError(
            f"quadrature for k={k} reported error {err} against value {val}"
        )
    return math.exp(log_max) * val


def marginal_pmf_quadrature(F: MixingModel, n: int, k_max: Optional[int] = None) -> DegreeLaw:
    """Marginal degree pmf P(d = k) = int g_n(t, k) dF(t / mu) by adaptive
    quadrature over the mixing support."""
    if n < 2:
        raise DomainError(f"n={n} must be >= 2")
    kk = n - 1 if k_max is None else min(k_max, n - 1)
    if isinstance(F, PointMassModel):
        p = F.value * F.value
        pmf = np.array([math.exp(_log_binom_kernel(p, k, n)) for k in range(kk + 1)])
        return DegreeLaw.from_pmf(pmf, QUADRATURE, n=n, mixing="point_mass")
    if isinstance(F, BoundedParetoModel):
        mu = F.mean()
        lo, hi = F.a, F.b
        density = lambda s: F.c * s ** (-F.beta)
    elif isinstance(F, SmoothDensityModel):
        mu = F.mu
        lo, hi = 0.0, 1.0
        density = F.f
    else:
        raise DomainError(f"unsupported mixing model {type(F)!r}")
    pmf = np.array([_mixture_entry(k, n, mu, density, lo, hi) for k in range(kk + 1)])
    total = pmf.sum()
    if k_max is None and abs(total - 1.0) > 1e-9:
        raise QuadratureError(f"quadrature pmf sums to {total}, off by more than 1e-9")
    return DegreeLaw.from_pmf(pmf, QUADRATURE, n=n, mu=mu)


def pareto_population_pmf(model: BoundedParetoModel, n: int) -> DegreeLaw:
    """Closed-form marginal pmf for bounded-Pareto mixing:

        n mu P(d=k) = c (k/(n mu))^(-beta) (I_{mu b} - I_{mu a})(k+1-beta, n-k)
                      * {1 + eps_{k,n}(beta)},
        eps_{k,n}(beta) = beta (beta - 1) (n - k) / (2 n k).

    Entries with k <= beta fall back to quadrature (flagged in extras).
    """
    if n < 2:
        raise DomainError(f"n={n} must be >= 2")
    mu = model.mean()
    beta, a, b, c = model.beta, model.a, model.b, model.c
    pmf = np.zeros(n)
    fallback = []
    for k in range(n):
        if k <= beta:
            pmf[k] = _mixture_entry(k, n, mu, lambda s: c * s ** (-beta), a, b)
            fallback.append(k)
            continue
        ib = reg_inc_beta(mu * b, k + 1 - beta, n - k)
        ia = reg_inc_beta(mu * a, k + 1 - beta, n - k) if a > 0.0 else 0.0
        eps = beta * (beta - 1.0) * (n - k) / (2.0 * n * k)
        val = c * (k / (n * mu)) ** (-beta) * (ib - ia) * (1.0 + eps) / (n * mu)
        pmf[k] = max(val, 0.0)
    return DegreeLaw.from_pmf(pmf, PARETO_CLOSED_FORM, n=n, mu=mu,
                              fallback_k=fallback)


def _repro_core(f, n: int, mu: float, k_hi: int) -> tuple[np.ndarray, np.ndarray]:
    """n mu P(d=k) = f((k+1) iota / ((n+1) mu)) I_mu(k+1, n-k) for k <= k_hi.

    Returns (scaled values, survival values)."""
    surv = binom_survival_all(n, mu)[: k_hi + 1]
    iotas = iota_all(n, mu)[: k_hi + 1]
    k = np.arange(k_hi + 1, dtype=float)
    arg = np.where(np.isnan(iotas), 1.0, (k + 1.0) * iotas / ((n + 1.0) * mu))
    arg = np.clip(arg, 0.0, 1.0)
    fvals = np.array([f(x) for x in arg])
    return fvals * surv, surv


def smooth_repro_pmf(model: SmoothDensityModel, n: int) -> DegreeLaw:
    """Reproduction approximation for a smooth mixing density, plus the
    simplified sifting heuristic f(k/(n mu) ^ 1)(1 - Phi(.)) for comparison."""
    if n < 2:
        raise DomainError(f"n={n} must be >= 2")
    mu = model.mu
    scaled, _surv = _repro_core(model.f, n, mu, n - 1)
    pmf = scaled / (n * mu)
    k = np.arange(n, dtype=float)
    zed = (k - n * mu) / math.sqrt(n * mu * (1.0 - mu))
    heuristic = np.array(
        [model.f(min(kk / (n * mu), 1.0)) for kk in k]
    ) * np.array([1.0 - _phi(z) for z in zed]) / (n * mu)
    return DegreeLaw.from_pmf(pmf, SMOOTH_REPRO, n=n, mu=mu, heuristic=heuristic)


def sparse_pmf(model: SmoothDensityModel, scaling: ScalingMap, n: int) -> DegreeLaw:
    """Degree pmf under the sparse rescaling pi(n) = sqrt(zeta / n^(2 gamma)) pi.

    Regimes: gamma <= 1/4 uses the incomplete-Beta reproduction form with
    mu replaced by mu_n; 1/4 < gamma <= 1/2 uses the incomplete-Gamma form
    with the Gamma-ratio correction that handles k = Omega(sqrt(n)).
    """
    gamma = scaling.gamma
    if not 0.0 < gamma <= 0.5:
        raise RegimeError(f"gamma={gamma} outside (0, 1/2]")
    if scaling.zeta_prime != 0.0:
        raise RegimeError("sparse pmf is analyzed for the zeta' = 0 path only")
    if scaling.zeta <= 0.0:
        raise RegimeError("zeta must be positive")
    if n < max(2, math.ceil(scaling.zeta ** (1.0 / (2.0 * gamma)))):
        raise RegimeError(f"n={n} below 2 v zeta^(1/(2 gamma))")
    mu = model.mu
    mu_n = mu * scaling.zeta / n ** (2.0 * gamma)
    if not 0.0 < mu_n < 1.0:
        raise RegimeError(f"scaled mean mu_n={mu_n} outside (0, 1)")
    lam = n * mu_n
    k_hi = min(n - 1, int(lam + 12.0 * math.sqrt(lam) + 30.0))
    if gamma <= 0.25:
        scaled, _ = _repro_core(model.f, n, mu_n, k_hi)
        pmf = scaled / (n * mu_n)
        provenance = SPARSE_BETA
    else:
        pmf = np.zeros(k_hi + 1)
        for k in range(k_hi + 1):
            nk = n - k - 1
            lam_k = nk * mu_n
            arg = min((k + 1) * rho(k, lam_k) / lam_k, 1.0)
            corr = math.exp(gammaln(nk + k + 1) - gammaln(nk + 1) - k * math.log(nk))
            pmf[k] = model.f(arg) * reg_inc_gamma_lower(k + 1, lam_k) * corr / (nk * mu_n)
        provenance = SPARSE_GAMMA
    return DegreeLaw.from_pmf(pmf, provenance, n=n, mu_n=mu_n, gamma=gamma,
                              zeta=scaling.zeta)


def extreme_sparse_pmf(model: SmoothDensityModel, zeta: float, k_max: int) -> DegreeLaw:
    """Limiting pmf of the extremely sparse regime: a mixed Poisson law
    P(d = k) = int (mu zeta t)^k exp(-mu zeta t) / k! dF(t), truncated at
    k_max, together with the incomplete-Gamma approximation and its
    relative-error bound c / zeta."""
    if zeta <= 0.0:
        raise DomainError(f"zeta={zeta} must be positive")
    if k_max < 0:
        raise DomainError("k_max must be nonnegative")
    mu = model.mu
    lam = mu * zeta

    def entry(k: int) -> float:
        def log_integrand(t: float) -> float:
            d = model.f(t)
            if d <= 0.0 or t <= 0.0:
                return -math.inf
            return k * math.log(lam * t) - lam * t - math.lgamma(k + 1) + math.log(d)

        probe = np.linspace(1e-12, 1.0, 65)
        log_max = max(log_integrand(t) for t in probe)
        if log_max == -math.inf:
            return 0.0
        val, _ = quad(lambda t: math.exp(max(log_integrand(t) - log_max, -745.0)),
                      0.0, 1.0, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL,
                      limit=_QUAD_LIMIT)
        return math.exp(log_max) * val

    pmf = np.array([entry(k) for k in range(k_max + 1)])
    tail = 1.0 - pmf.sum()
    if tail > _EXTREME_TAIL_TOL:
        raise KMaxTooSmallError(
            f"truncated tail mass {tail} exceeds {_EXTREME_TAIL_TOL}; raise k_max"
        )
    approx = np.array(
        [model.f(min((k + 1) * rho(k, lam) / lam, 1.0))
         * reg_inc_gamma_lower(k + 1, lam) / lam
         for k in range(k_max + 1)]
    )
    grid = np.linspace(0.0, 1.0, 2001)
    inf_f = float(min(model.f(t) for t in grid))
    bound = math.inf if inf_f <= 0.0 else (
        model.f_second_deriv_sup / (2.0 * mu * inf_f) / zeta
    )
    return DegreeLaw.from_pmf(pmf, EXTREME_LIMIT, n=k_max + 1, zeta=zeta,
                              approx=approx, rel_error_bound=bound)


def tv_distance_to_poisson(pi: WeightVector, i: int) -> tuple[float, float]:
    """Total variation distance between the exact law of d_i and a Poisson
    with the same mean, plus the order-statement scale min{E,1}(1 - var/E)."""
    mean = conditional_mean(pi, i)
    if mean <= 0.0:
        raise DegenerateError("Poisson comparison needs a positive mean")
    var = conditional_variance(pi, i)
    law = conditional_degree_law(pi, i)
    n = pi.n
    k = np.arange(n, dtype=float)
    log_pois = k * math.log(mean) - mean - gammaln(k + 1.0)
    pois = np.exp(log_pois)
    tv = 0.5 * (np.abs(law.pmf - pois).sum() + max(1.0 - pois.sum(), 0.0))
    bound_scale = min(mean, 1.0) * (1.0 - var / mean)
    return float(tv), float(bound_scale)
