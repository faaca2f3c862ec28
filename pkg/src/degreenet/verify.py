"""Runnable verification suites: the Hoeffding sandwich grid, the exact
Poisson-Binomial enumeration oracle, and the seeded coverage study for the
weight-estimator central limit theorem.

All grids, seeds, and tolerances for the property batteries live here in
one place so test runs and `degreenet verify` exercise identical checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import kstest

from .errors import DomainError
from .degree_laws import poisson_binomial_pmf
from .estimate import clt_report
from .sampler import sample_population
from .specfun import binom_survival_all, _phi
from .weights import PowerLawModel, materialize_power_law

# --- pinned grids, seeds, and tolerances (shared with the test suite) ------
GRID_NS = (10, 100, 500, 1000)
GRID_MUS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
BERRY_ESSEEN_STABILITY = 2.0  # max_n C_n / min_n C_n must stay below this

ORACLE_MS = tuple(range(2, 13))
ORACLE_SEEDS = 50
ORACLE_TOL = 1e-12
ORACLE_MASTER_SEED = 7

CLT_GAMMA = 0.3
CLT_THETA = 1.0
CLT_N = 2000
CLT_REPLICATES = 2000
CLT_SEED = 555
CLT_LEVEL = 0.95
CLT_COVERAGE_RANGE = (0.93, 0.97)
CLT_KS_MAX = 0.05

CHI2_ALPHA = 0.001  # fixed threshold for sampler-equivalence tests


@dataclass(frozen=True)
class CheckResult:
    """One verification check: a measured quantity against its bound."""

    name: str
    passed: bool
    measured: float
    bound: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "bound": self.bound,
            "detail": self.detail,
        }


def _hoeffding_bounds_all(n: int, mu: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized tail sandwich for every k = 0..n-1."""
    k = np.arange(n, dtype=float)
    below = k <= n * mu
    lower = np.where(below, 1.0 - 0.5 * np.exp(-2.0 * (k - n * mu) ** 2 / n), 0.0)
    upper = np.where(below, 1.0, 0.5 * np.exp(-2.0 * (k - n * mu + 1.0) ** 2 / n))
    return lower, upper


def suite_specfun() -> list[CheckResult]:
    """Sandwich containment on the full grid plus Berry-Esseen scaling."""
    results = []
    worst_violation = -math.inf
    c_by_n = {}
    for n in GRID_NS:
        c_n = 0.0
        for mu in GRID_MUS:
            surv = binom_survival_all(n, mu)
            lower, upper = _hoeffding_bounds_all(n, mu)
            violation = float(max((lower - surv).max(), (surv - upper).max()))
            worst_violation = max(worst_violation, violation)
            k = np.arange(n, dtype=float)
            normal = 1.0 - np.array(
                [_phi(z) for z in (k - n * mu) / math.sqrt(n * mu * (1.0 - mu))]
            )
            c_n = max(c_n, float(np.abs(surv - normal).max()) * math.sqrt(n))
        c_by_n[n] = c_n
    results.append(CheckResult(
        name="hoeffding_sandwich_containment",
        passed=worst_violation <= 1e-12,
        measured=worst_violation,
        bound=1e-12,
        detail=f"max bound violation over n in {GRID_NS}, mu in {GRID_MUS}",
    ))
    cs = list(c_by_n.values())
    ratio = max(cs) / min(cs)
    results.append(CheckResult(
        name="berry_esseen_constant_stability",
        passed=ratio < BERRY_ESSEEN_STABILITY,
        measured=ratio,
        bound=BERRY_ESSEEN_STABILITY,
        detail=f"sqrt(n)-scaled Normal-approx error constants {c_by_n}",
    ))
    return results


def poisson_binomial_enumeration(probs: np.ndarray) -> np.ndarray:
    """Brute-force pmf over all 2^m outcomes; test oracle only (m <= 20)."""
    probs = np.asarray(probs, dtype=float)
    m = probs.size
    if m > 20:
        raise DomainError("enumeration oracle is exponential; use m <= 20")
    outcomes = np.arange(2**m, dtype=np.int64)
    bits = (outcomes[:, None] >> np.arange(m)) & 1
    weights = np.where(bits == 1, probs, 1.0 - probs).prod(axis=1)
    counts = bits.sum(axis=1)
    return np.bincount(counts, weights=weights, minlength=m + 1)


def suite_oracle() -> list[CheckResult]:
    """Exactness of the convolution pmf against full enumeration."""
    worst = 0.0
    for m in ORACLE_MS:
        for s in range(ORACLE_SEEDS):
            rng = np.random.Generator(
                np.random.Philox(np.random.SeedSequence([ORACLE_MASTER_SEED, m, s]))
            )
            probs = rng.random(m)
            law = poisson_binomial_pmf(probs)
            oracle = poisson_binomial_enumeration(probs)
            worst = max(worst, float(np.abs(law.pmf - oracle).max()))
    return [CheckResult(
        name="poisson_binomial_enumeration_match",
        passed=worst <= ORACLE_TOL,
        measured=worst,
        bound=ORACLE_TOL,
        detail=f"{ORACLE_SEEDS} seeded instances at each m in {ORACLE_MS}",
    )]


def clt_study(
    n: int = CLT_N,
    replicates: int = CLT_REPLICATES,
    master_seed: int = CLT_SEED,
    gamma: float = CLT_GAMMA,
    theta: float = CLT_THETA,
) -> tuple[float, float]:
    """(coverage of pi_1, KS distance of standardized pi_hat_1 to Normal)."""
    pi = materialize_power_law(PowerLawModel(gamma=gamma, theta_n=theta), n)
    target = float(pi.values[0])
    zs = np.empty(replicates)
    covered = 0
    for idx, sample in enumerate(
        sample_population(pi, None, n, replicates, master_seed)
    ):
        report = clt_report(sample.degrees, level=CLT_LEVEL)
        zs[idx] = (report.pi_hat[0] - target) / report.std_errors[0]
        lo, hi = report.intervals[0]
        covered += int(lo <= target <= hi)
    ks = float(kstest(zs, "norm").statistic)
    return covered / replicates, ks


def suite_clt() -> list[CheckResult]:
    """Seeded Monte Carlo coverage and Normality of the weight estimator."""
    coverage, ks = clt_study()
    lo, hi = CLT_COVERAGE_RANGE
    return [
        CheckResult(
            name="clt_interval_coverage",
            passed=lo <= coverage <= hi,
            measured=coverage,
            bound=hi,
            detail=f"target window [{lo}, {hi}] at level {CLT_LEVEL}, "
                   f"n={CLT_N}, {CLT_REPLICATES} replicates, seed {CLT_SEED}",
        ),
        CheckResult(
            name="clt_standardized_ks_distance",
            passed=ks < CLT_KS_MAX,
            measured=ks,
            bound=CLT_KS_MAX,
            detail="KS distance of standardized estimates to a standard Normal",
        ),
    ]


SUITES = {
    "specfun": suite_specfun,
    "oracle": suite_oracle,
    "clt": suite_clt,
}


def run_suite(name: str) -> list[CheckResult]:
    if name not in SUITES:
        raise DomainError(f"unknown verification suite {name!r}; "
                          f"choose from {sorted(SUITES)}")
    return SUITES[name]()
