"""Weight-vector models: deterministic power laws with optional envelope,
bounded Pareto sampling, smooth mixing densities, point masses, and the
sparsity scaling map.

Weight vectors are stored unsorted as generated so that degree indices
track weight indices; sorting is an explicit separate view.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, ModelInvalidError

_DENSITY_CHECK_TOL = 1e-8
_PARETO_NORM_TOL = 1e-12


@dataclass(frozen=True)
class WeightVector:
    """A parameter vector in [0, 1]^n generating all edge probabilities."""

    values: np.ndarray
    model_tag: str
    seed: Optional[int] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise ModelInvalidError("weight vector needs at least 2 entries")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise ModelInvalidError("weight entries must lie in [0, 1]")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.size

    def sorted_descending(self) -> np.ndarray:
        """Sorted view; does not alter the stored ordering."""
        return np.sort(self.values)[::-1]

    def norm1(self) -> float:
        return float(np.sum(self.values))

    def norm2_sq(self) -> float:
        return float(np.sum(self.values**2))


@dataclass(frozen=True)
class PowerLawModel:
    """pi_i = theta_n * i^(-gamma)."""

    gamma: float
    theta_n: float

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ModelInvalidError(f"gamma={self.gamma} outside (0, 1)")
        if not 0.0 <= self.theta_n <= 1.0:
            raise ModelInvalidError(f"theta_n={self.theta_n} outside [0, 1]")


@dataclass(frozen=True)
class EnvelopeModel:
    """pi_i = xi(i/n) * theta_n * i^(-gamma), with xi tabulated on (0, 1]
    and constrained to a declared band [xi_min, xi_max]."""

    gamma: float
    theta_n: float
    xi_grid: np.ndarray
    xi_values: np.ndarray
    xi_min: float
    xi_max: float

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ModelInvalidError(f"gamma={self.gamma} outside (0, 1)")
        if not 0.0 <= self.theta_n <= 1.0:
            raise ModelInvalidError(f"theta_n={self.theta_n} outside [0, 1]")
        grid = np.asarray(self.xi_grid, dtype=float)
        vals = np.asarray(self.xi_values, dtype=float)
        if grid.shape != vals.shape or grid.ndim != 1 or grid.size < 2:
            raise ModelInvalidError("xi must be tabulated on a 1-d grid")
        if np.any(grid <= 0.0) or np.any(grid > 1.0) or np.any(np.diff(grid) <= 0):
            raise ModelInvalidError("xi grid must be strictly increasing in (0, 1]")
        if not (0.0 < self.xi_min <= self.xi_max < math.inf):
            raise ModelInvalidError("need 0 < xi_min <= xi_max < inf")
        if np.any(vals < self.xi_min) or np.any(vals > self.xi_max):
            raise ModelInvalidError("tabulated xi exceeds its declared bounds")
        object.__setattr__(self, "xi_grid", grid)
        object.__setattr__(self, "xi_values", vals)

    def xi(self, x):
        """Linear interpolation on the tabulated grid; outside (0, 1] is a
        domain error."""
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0.0) or np.any(x > 1.0):
            raise DomainError("xi is only defined on (0, 1]")
        return np.interp(x, self.xi_grid, self.xi_values)


@dataclass(frozen=True)
class BoundedParetoModel:
    """Mixing density f(pi) = c * pi^(-beta) on [a, b) subset of [0, 1]."""

    beta: float
    a: float
    b: float
    c: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.beta < 0.0:
            raise ModelInvalidError(f"beta={self.beta} must be nonnegative")
        if not 0.0 <= self.a < self.b <= 1.0:
            raise ModelInvalidError(f"need 0 <= a < b <= 1 (a={self.a}, b={self.b})")
        if self.beta >= 1.0 and self.a <= 0.0:
            raise ModelInvalidError("a must be positive when beta >= 1")
        c_exact = 1.0 / self._norm_integral()
        if self.c is None:
            object.__setattr__(self, "c", c_exact)
        elif abs(self.c - c_exact) > _PARETO_NORM_TOL * max(1.0, abs(c_exact)):
            raise ModelInvalidError(
                f"normalizer c={self.c} inconsistent with 1/int pi^-beta = {c_exact}"
            )

    def _norm_integral(self) -> float:
        if self.beta == 1.0:
            return math.log(self.b / self.a)
        e = 1.0 - self.beta
        return (self.b**e - self.a**e) / e

    def mean(self) -> float:
        """mu = c * int_a^b pi^(1-beta) dpi."""
        if self.beta == 2.0:
            return self.c * math.log(self.b / self.a)
        e = 2.0 - self.beta
        return self.c * (self.b**e - self.a**e) / e

    def second_moment(self) -> float:
        if self.beta == 3.0:
            return self.c * math.log(self.b / self.a)
        e = 3.0 - self.beta
        return self.c * (self.b**e - self.a**e) / e

    def variance(self) -> float:
        return self.second_moment() - self.mean() ** 2

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), self.a, self.b)
        if self.beta == 1.0:
            return np.log(x / self.a) / math.log(self.b / self.a)
        e = 1.0 - self.beta
        return (x**e - self.a**e) / (self.b**e - self.a**e)

    def inverse_cdf(self, u):
        u = np.asarray(u, dtype=float)
        if self.beta == 1.0:
            # logarithmic branch
            return self.a * (self.b / self.a) ** u
        e = 1.0 - self.beta
        return (self.a**e + u * (self.b**e - self.a**e)) ** (1.0 / e)


@dataclass(frozen=True)
class SmoothDensityModel:
    """A mixing density on [0, 1] that is twice differentiable with bounded
    second derivative; the curvature constant feeds the reproduction bound."""

    f: Callable[[float], float]
    f_second_deriv_sup: float
    mu: float
    sigma2: float
    poly_coeffs: Optional[tuple] = None  # low->high; set when f is polynomial

    def __post_init__(self):
        if self.f_second_deriv_sup < 0.0:
            raise ModelInvalidError("sup |f''| must be nonnegative")
        mass, _ = quad(self.f, 0.0, 1.0, epsabs=1e-12, limit=200)
        if abs(mass - 1.0) > _DENSITY_CHECK_TOL:
            raise ModelInvalidError(f"density does not integrate to 1 (got {mass})")
        m1, _ = quad(lambda t: t * self.f(t), 0.0, 1.0, epsabs=1e-12, limit=200)
        m2, _ = quad(lambda t: t * t * self.f(t), 0.0, 1.0, epsabs=1e-12, limit=200)
        if abs(m1 - self.mu) > _DENSITY_CHECK_TOL:
            raise ModelInvalidError(f"declared mu={self.mu} but quadrature gives {m1}")
        if abs((m2 - m1 * m1) - self.sigma2) > _DENSITY_CHECK_TOL:
            raise ModelInvalidError(
                f"declared sigma2={self.sigma2} but quadrature gives {m2 - m1 * m1}"
            )

    @property
    def curvature_constant(self) -> float:
        """c = sup |f''| / 2 in the reproduction bound."""
        return self.f_second_deriv_sup / 2.0


def smooth_density_from_poly(coeffs) -> SmoothDensityModel:
    """Build a SmoothDensityModel from polynomial coefficients (low -> high),
    normalizing to unit mass on [0, 1]."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size == 0:
        raise ModelInvalidError("empty coefficient list")
    mass = float(np.sum(coeffs / np.arange(1, coeffs.size + 1)))
    if mass <= 0.0:
        raise ModelInvalidError("polynomial has nonpositive mass on [0, 1]")
    coeffs = coeffs / mass
    poly = np.polynomial.Polynomial(coeffs)
    if np.any(poly(np.linspace(0.0, 1.0, 2001)) < -1e-12):
        raise ModelInvalidError("polynomial density is negative on [0, 1]")
    d2 = poly.deriv(2) if coeffs.size > 2 else np.polynomial.Polynomial([0.0])
    sup_d2 = float(np.max(np.abs(d2(np.linspace(0.0, 1.0, 4001)))))
    mu = float(np.sum(coeffs / np.arange(2, coeffs.size + 2)))
    m2 = float(np.sum(coeffs / np.arange(3, coeffs.size + 3)))
    return SmoothDensityModel(
        f=lambda t, _p=poly: float(_p(t)),
        f_second_deriv_sup=sup_d2,
        mu=mu,
        sigma2=m2 - mu * mu,
        poly_coeffs=tuple(coeffs.tolist()),
    )


def uniform_density() -> SmoothDensityModel:
    return smooth_density_from_poly([1.0])


@dataclass(frozen=True)
class PointMassModel:
    """Degenerate mixing law: every weight equals `value`."""

    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ModelInvalidError(f"value={self.value} outside [0, 1]")

    @property
    def mu(self) -> float:
        return self.value

    @property
    def sigma2(self) -> float:
        return 0.0


@dataclass(frozen=True)
class ScalingMap:
    """pi -> (sqrt(zeta / n^(2 gamma)) pi + sqrt(zeta' / n^(2 gamma'))) ^ 1."""

    gamma: float = 0.0
    zeta: float = 1.0
    gamma_prime: float = 0.0
    zeta_prime: float = 0.0

    def __post_init__(self):
        for name in ("gamma", "zeta", "gamma_prime", "zeta_prime"):
            if getattr(self, name) < 0.0:
                raise ModelInvalidError(f"{name} must be nonnegative")

    def slope(self, n: int) -> float:
        return math.sqrt(self.zeta / n ** (2.0 * self.gamma))

    def offset(self, n: int) -> float:
        if self.zeta_prime == 0.0:
            return 0.0
        return math.sqrt(self.zeta_prime / n ** (2.0 * self.gamma_prime))


WeightModel = Union[
    PowerLawModel, EnvelopeModel, BoundedParetoModel, SmoothDensityModel, PointMassModel
]


def materialize_power_law(
    model: Union[PowerLawModel, EnvelopeModel], n: int
) -> WeightVector:
    """Evaluate a deterministic (possibly enveloped) power law at size n."""
    if n < 2:
        raise DomainError(f"n={n} must be >= 2")
    i = np.arange(1, n + 1, dtype=float)
    values = model.theta_n * i ** (-model.gamma)
    if isinstance(model, EnvelopeModel):
        values = values * model.xi(i / n)
        tag = f"envelope(gamma={model.gamma},theta={model.theta_n})"
    else:
        tag = f"power_law(gamma={model.gamma},theta={model.theta_n})"
    if np.any(values > 1.0):
        raise ModelInvalidError("power-law weights exceed 1; reduce theta_n or xi")
    return WeightVector(values=values, model_tag=tag)


def sample_bounded_pareto(
    model: BoundedParetoModel, n: int, seed: int
) -> WeightVector:
    """i.i.d. inverse-CDF draws from the bounded Pareto density."""
    if n < 2:
        raise DomainError(f"n={n} must be >= 2")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    values = model.inverse_cdf(rng.random(n))
    return WeightVector(
        values=values,
        model_tag=f"bounded_pareto(beta={model.beta},a={model.a},b={model.b})",
        seed=seed,
    )


def sample_from_density(
    model: Union[SmoothDensityModel, PointMassModel], n: int, seed: int,
    grid_size: int = 8193,
) -> WeightVector:
    """i.i.d. draws from a smooth mixing density via a tabulated inverse CDF."""
    if n < 2:
        raise DomainError(f"n={n} must be >= 2")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    if isinstance(model, PointMassModel):
        values = np.full(n, model.value)
        return WeightVector(values=values, model_tag=f"point_mass({model.value})", seed=seed)
    grid = np.linspace(0.0, 1.0, grid_size)
    dens = np.array([model.f(t) for t in grid])
    cdf = np.concatenate([[0.0], np.cumsum((dens[1:] + dens[:-1]) * np.diff(grid) / 2.0)])
    cdf /= cdf[-1]
    values = np.interp(rng.random(n), cdf, grid)
    return WeightVector(values=values, model_tag="smooth_density", seed=seed)


def apply_scaling(pi: WeightVector, scaling: ScalingMap, n: Optional[int] = None) -> WeightVector:
    """Elementwise affine map then clamp at 1, exactly as written."""
    n = pi.n if n is None else n
    values = np.minimum(scaling.slope(n) * pi.values + scaling.offset(n), 1.0)
    return WeightVector(
        values=values,
        model_tag=f"{pi.model_tag}|scaled(gamma={scaling.gamma},zeta={scaling.zeta})",
        seed=pi.seed,
    )


# ---------------------------------------------------------------------------
# JSON configuration schema for weight models.
#
#   {"kind": "power_law",      "gamma": g, "theta_n": t}
#   {"kind": "envelope",       "gamma": g, "theta_n": t,
#    "xi_grid": [...], "xi_values": [...], "xi_min": lo, "xi_max": hi}
#   {"kind": "bounded_pareto", "beta": b, "a": a, "b": b_}
#   {"kind": "smooth_poly",    "coeffs": [c0, c1, ...]}   # normalized on load
#   {"kind": "point_mass",     "value": v}
# Optional on any block: "seed": <64-bit int>.
# ---------------------------------------------------------------------------

def model_to_dict(model: WeightModel) -> dict:
    if isinstance(model, PowerLawModel):
        return {"kind": "power_law", "gamma": model.gamma, "theta_n": model.theta_n}
    if isinstance(model, EnvelopeModel):
        return {
            "kind": "envelope",
            "gamma": model.gamma,
            "theta_n": model.theta_n,
            "xi_grid": list(model.xi_grid),
            "xi_values": list(model.xi_values),
            "xi_min": model.xi_min,
            "xi_max": model.xi_max,
        }
    if isinstance(model, BoundedParetoModel):
        return {"kind": "bounded_pareto", "beta": model.beta, "a": model.a, "b": model.b}
    if isinstance(model, SmoothDensityModel):
        if model.poly_coeffs is None:
            raise ModelInvalidError("only polynomial smooth densities serialize to JSON")
        return {"kind": "smooth_poly", "coeffs": list(model.poly_coeffs)}
    if isinstance(model, PointMassModel):
        return {"kind": "point_mass", "value": model.value}
    raise ModelInvalidError(f"unknown model type {type(model)!r}")


def model_from_dict(block: dict) -> WeightModel:
    kind = block.get("kind")
    if kind == "power_law":
        return PowerLawModel(gamma=block["gamma"], theta_n=block["theta_n"])
    if kind == "envelope":
        return EnvelopeModel(
            gamma=block["gamma"],
            theta_n=block["theta_n"],
            xi_grid=np.asarray(block["xi_grid"], dtype=float),
            xi_values=np.asarray(block["xi_values"], dtype=float),
            xi_min=block["xi_min"],
            xi_max=block["xi_max"],
        )
    if kind == "bounded_pareto":
        return BoundedParetoModel(beta=block["beta"], a=block["a"], b=block["b"])
    if kind == "smooth_poly":
        return smooth_density_from_poly(block["coeffs"])
    if kind == "point_mass":
        return PointMassModel(value=block["value"])
    raise ModelInvalidError(f"unknown model kind {kind!r}")


def model_to_json(model: WeightModel) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True)


def model_from_json(text: str) -> WeightModel:
    return model_from_dict(json.loads(text))
