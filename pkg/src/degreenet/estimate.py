"""Degree-based estimation: the moment estimators for weights and edge
probabilities, large-sample standard errors and intervals, and an
exploratory power-law exponent fit."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import ndtri

from .errors import DomainError, EmptyGraphError, InsufficientDataError

# Ranks with observed degree below this are trimmed from the exponent fit,
# and trigger the small-degree warning on interval reports.
MIN_DEGREE_FOR_NORMAL = 10


@dataclass(frozen=True)
class EstimateReport:
    """Weight estimates with standard errors and Normal-quantile intervals."""

    pi_hat: np.ndarray
    std_errors: np.ndarray
    intervals: np.ndarray  # (n, 2) lo/hi
    degree_sum: int
    level: float
    small_degree_warning: bool

    def p_hat(self, i: int, j: int) -> float:
        """Edge probability estimate d_i d_j / ||d||_1 via pi_hat_i pi_hat_j."""
        if i == j:
            raise DomainError("p_hat requires distinct indices")
        return float(self.pi_hat[i] * self.pi_hat[j])


def pi_hat(degrees: np.ndarray) -> np.ndarray:
    """Moment estimator d_i / sqrt(||d||_1)."""
    degrees = np.asarray(degrees, dtype=float)
    total = degrees.sum()
    if total <= 0:
        raise EmptyGraphError("cannot estimate weights from an empty graph")
    return degrees / math.sqrt(total)


def p_hat(degrees: np.ndarray, i: int, j: int) -> tuple[float, bool]:
    """d_i d_j / ||d||_1, clamped to [0, 1]; the flag reports clamping."""
    degrees = np.asarray(degrees, dtype=float)
    if i == j:
        raise DomainError("p_hat requires distinct indices")
    if not (0 <= i < degrees.size and 0 <= j < degrees.size):
        raise DomainError("node index out of range")
    total = degrees.sum()
    if total <= 0:
        raise EmptyGraphError("cannot estimate from an empty graph")
    raw = degrees[i] * degrees[j] / total
    return min(raw, 1.0), raw > 1.0


def clt_report(degrees: np.ndarray, level: float = 0.95) -> EstimateReport:
    """Plug-in CLT report: SE_i = sqrt(pi_hat_i / sqrt(||d||_1)), Normal
    quantile intervals at the given level.

    Flags the report when any degree is below 10, where the Normal regime
    is dubious.
    """
    if not 0.0 < level < 1.0:
        raise DomainError(f"level={level} outside (0, 1)")
    degrees = np.asarray(degrees, dtype=float)
    est = pi_hat(degrees)
    total = degrees.sum()
    se = np.sqrt(est / math.sqrt(total))
    z = float(ndtri(0.5 + level / 2.0))
    intervals = np.column_stack([est - z * se, est + z * se])
    return EstimateReport(
        pi_hat=est,
        std_errors=se,
        intervals=intervals,
        degree_sum=int(round(total)),
        level=level,
        small_degree_warning=bool(np.any(degrees < MIN_DEGREE_FOR_NORMAL)),
    )


@dataclass(frozen=True)
class ExponentFit:
    gamma_hat: float
    theta_hat: float
    n_used: int
    residual_std: float
    r_squared: float


def fit_exponent(degrees: np.ndarray) -> ExponentFit:
    """Least-squares fit of log pi_hat_(i) against log rank i, over ranks
    whose sorted degree is at least 10. Exploratory only: the slope is
    -gamma_hat and the intercept gives theta_hat."""
    degrees = np.asarray(degrees, dtype=float)
    if degrees.size < 10:
        raise InsufficientDataError("need at least 10 nodes")
    est = pi_hat(degrees)
    order = np.argsort(-degrees, kind="stable")
    sorted_deg = degrees[order]
    sorted_pi = est[order]
    keep = sorted_deg >= MIN_DEGREE_FOR_NORMAL
    if keep.sum() < 10:
        raise InsufficientDataError(
            "fewer than 10 ranks with degree >= 10; exponent fit unreliable"
        )
    ranks = np.arange(1, degrees.size + 1, dtype=float)[keep]
    x = np.log(ranks)
    y = np.log(sorted_pi[keep])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return ExponentFit(
        gamma_hat=float(-slope),
        theta_hat=float(math.exp(intercept)),
        n_used=int(keep.sum()),
        residual_std=float(resid.std()),
        r_squared=r2,
    )


def degrees_from_edge_list(
    edges: np.ndarray, n: Optional[int] = None, one_indexed: bool = False
) -> np.ndarray:
    """Tally degrees from an (m, 2) integer edge array."""
    edges = np.asarray(edges, dtype=np.int64)
    if edges.size == 0:
        raise EmptyGraphError("edge list is empty")
    if edges.ndim != 2 or edges.shape[1] != 2:
        raise DomainError("edge list must be an (m, 2) array")
    if one_indexed:
        edges = edges - 1
    if np.any(edges < 0):
        raise DomainError("negative node index after re-indexing")
    size = int(edges.max()) + 1 if n is None else n
    return np.bincount(edges[:, 0], minlength=size) + np.bincount(
        edges[:, 1], minlength=size
    )


def read_edge_list(path, one_indexed: bool = False) -> np.ndarray:
    """Read a two-column whitespace-separated edge file into degrees."""
    edges = np.loadtxt(path, dtype=np.int64, ndmin=2)
    return degrees_from_edge_list(edges, one_indexed=one_indexed)


def read_degree_file(path) -> np.ndarray:
    """Read a one-count-per-line degree file."""
    return np.loadtxt(path, dtype=np.int64, ndmin=1)
