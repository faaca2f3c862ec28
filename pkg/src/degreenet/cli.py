"""Command-line entry point.

Subcommands: exact-pmf, simulate, figure, estimate, verify. Configuration
comes from a JSON file plus flag overrides; every randomized path requires
an explicit master seed. Exit codes: 0 success, 1 validation error,
2 numeric failure, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .degree_laws import (
    conditional_degree_law,
    extreme_sparse_pmf,
    marginal_pmf_quadrature,
    pareto_population_pmf,
    smooth_repro_pmf,
    sparse_pmf,
)
from .errors import (
    ConfigError,
    DegreeNetError,
    KMaxTooSmallError,
    NumericUnderflowError,
    QuadratureError,
)
from .estimate import clt_report, fit_exponent, read_degree_file, read_edge_list
from .sampler import draw_weights, sample_population
from .schema import degree_law_columns, write_csv, write_manifest
from .specfun import binom_survival_all, reg_inc_beta
from .verify import run_suite
from .weights import (
    BoundedParetoModel,
    PointMassModel,
    ScalingMap,
    SmoothDensityModel,
    model_from_dict,
    smooth_density_from_poly,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERIC = 2
EXIT_VERIFICATION = 3

_LAWS = ("conditional", "marginal", "pareto", "smooth-repro", "sparse", "extreme")

# Default smooth mixing densities for the reproduction figure. The source
# material leaves these unspecified; we ship three strictly positive
# polynomials (linear, quadratic, cubic) as documented defaults.
FIGURE3_DENSITIES = {
    "linear": (1.0, 1.0),
    "quadratic": (2.0, -2.0, 3.0),
    "cubic": (1.0, 2.0, -3.0, 2.0),
}


@dataclass(frozen=True)
class RunConfig:
    """One resolved CLI run: model plus run-shape parameters."""

    command: str
    model: Optional[dict] = None
    scaling: Optional[dict] = None
    n: Optional[int] = None
    replicates: int = 1
    master_seed: Optional[int] = None
    output_dir: Path = Path(".")
    law: Optional[str] = None
    node: int = 0
    zeta: Optional[float] = None
    k_max: Optional[int] = None
    sparse_sampler: bool = False
    store_edges: bool = False

    def require(self, name: str):
        value = getattr(self, name)
        if value is None:
            raise ConfigError(f"missing required field '{name}' "
                              f"(set it in the config file or via a flag)")
        return value


def _load_config(args: argparse.Namespace) -> RunConfig:
    block: dict = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file {path} does not exist")
        try:
            block = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}, "
                              f"column {exc.colno}: {exc.msg}") from exc
        if not isinstance(block, dict):
            raise ConfigError(f"{path}: top level must be a JSON object")
    def pick(flag, key, default=None):
        v = getattr(args, flag, None)
        if v is not None:
            return v
        return block.get(key, default)

    cfg = RunConfig(
        command=args.command,
        model=block.get("model"),
        scaling=block.get("scaling"),
        n=pick("n", "n"),
        replicates=int(pick("replicates", "replicates", 1)),
        master_seed=pick("master_seed", "master_seed"),
        output_dir=Path(pick("out", "output_dir", ".")),
        law=pick("law", "law"),
        node=int(pick("node", "node", 0)),
        zeta=pick("zeta", "zeta"),
        k_max=pick("k_max", "k_max"),
        sparse_sampler=bool(pick("sparse", "sparse_sampler", False)),
        store_edges=bool(block.get("store_edges", False)),
    )
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    return cfg


def _config_dict(cfg: RunConfig) -> dict:
    out = {
        "command": cfg.command,
        "model": cfg.model,
        "scaling": cfg.scaling,
        "n": cfg.n,
        "replicates": cfg.replicates,
        "master_seed": cfg.master_seed,
        "law": cfg.law,
        "node": cfg.node,
        "zeta": cfg.zeta,
        "k_max": cfg.k_max,
        "sparse_sampler": cfg.sparse_sampler,
        "version": __version__,
    }
    return {k: v for k, v in out.items() if v is not None}


def _build_model(cfg: RunConfig):
    if cfg.model is None:
        raise ConfigError("missing 'model' block in config")
    try:
        return model_from_dict(cfg.model)
    except KeyError as exc:
        raise ConfigError(f"model block missing field {exc}") from exc


def _build_scaling(cfg: RunConfig) -> Optional[ScalingMap]:
    if cfg.scaling is None:
        return None
    known = {"gamma", "zeta", "gamma_prime", "zeta_prime"}
    extra = set(cfg.scaling) - known
    if extra:
        raise ConfigError(f"unknown scaling fields {sorted(extra)}")
    return ScalingMap(**cfg.scaling)


def cmd_exact_pmf(cfg: RunConfig) -> int:
    model = _build_model(cfg)
    law_name = cfg.require("law")
    if law_name not in _LAWS:
        raise ConfigError(f"law must be one of {_LAWS}, got {law_name!r}")
    outputs = []
    if law_name == "conditional":
        n = int(cfg.require("n"))
        if isinstance(model, (BoundedParetoModel, SmoothDensityModel)):
            seed = int(cfg.require("master_seed"))  # randomized weight draw
        else:
            seed = cfg.master_seed or 0
        pi = draw_weights(model, n, seed, _build_scaling(cfg))
        law = conditional_degree_law(pi, cfg.node)
    elif law_name == "marginal":
        if not isinstance(model, (BoundedParetoModel, SmoothDensityModel, PointMassModel)):
            raise ConfigError("marginal quadrature needs a mixing model "
                              "(bounded_pareto, smooth_poly, or point_mass)")
        law = marginal_pmf_quadrature(model, int(cfg.require("n")))
    elif law_name == "pareto":
        if not isinstance(model, BoundedParetoModel):
            raise ConfigError("law 'pareto' requires a bounded_pareto model")
        law = pareto_population_pmf(model, int(cfg.require("n")))
    elif law_name == "smooth-repro":
        if not isinstance(model, SmoothDensityModel):
            raise ConfigError("law 'smooth-repro' requires a smooth_poly model")
        law = smooth_repro_pmf(model, int(cfg.require("n")))
    elif law_name == "sparse":
        if not isinstance(model, SmoothDensityModel):
            raise ConfigError("law 'sparse' requires a smooth_poly model")
        scaling = _build_scaling(cfg)
        if scaling is None:
            raise ConfigError("law 'sparse' requires a scaling block")
        law = sparse_pmf(model, scaling, int(cfg.require("n")))
    else:  # extreme
        if not isinstance(model, SmoothDensityModel):
            raise ConfigError("law 'extreme' requires a smooth_poly model")
        law = extreme_sparse_pmf(model, float(cfg.require("zeta")),
                                 int(cfg.require("k_max")))
    path = cfg.output_dir / "degree_law.csv"
    write_csv(path, degree_law_columns(law))
    outputs.append(str(path))
    write_manifest(cfg.output_dir / "manifest.json", _config_dict(cfg), outputs)
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    model = _build_model(cfg)
    scaling = _build_scaling(cfg)
    n = int(cfg.require("n"))
    seed = int(cfg.require("master_seed"))
    rows_rep, rows_k, rows_count = [], [], []
    pooled = np.zeros(n, dtype=np.int64)
    for sample in sample_population(model, scaling, n, cfg.replicates, seed,
                                    sparse=cfg.sparse_sampler,
                                    store_edges=cfg.store_edges):
        hist = np.bincount(sample.degrees, minlength=n)[:n]
        pooled += hist
        nz = np.flatnonzero(hist)
        rows_rep.extend([sample.replicate_id] * nz.size)
        rows_k.extend(nz.tolist())
        rows_count.extend(hist[nz].tolist())
    hist_path = cfg.output_dir / "histogram.csv"
    write_csv(hist_path, {"replicate_id": rows_rep, "k": rows_k,
                          "count": rows_count})
    pooled_path = cfg.output_dir / "pooled_histogram.csv"
    write_csv(pooled_path, {"k": np.arange(n), "count": pooled})
    write_manifest(cfg.output_dir / "manifest.json", _config_dict(cfg),
                   [str(hist_path), str(pooled_path)])
    return EXIT_OK


def _figure1(cfg: RunConfig) -> list[str]:
    """Binomial survival curve at n=500, mu=1/2, plus the (k, mu) surface."""
    n = 500
    surv = binom_survival_all(n, 0.5)
    curve = cfg.output_dir / "fig1_curve.csv"
    write_csv(curve, {"k": np.arange(n), "survival": surv})
    ks, mus, vals = [], [], []
    for mu in np.round(np.arange(0.02, 0.99, 0.02), 2):
        s = binom_survival_all(n, float(mu))
        for k in range(0, n, 5):
            ks.append(k)
            mus.append(float(mu))
            vals.append(s[k])
    surface = cfg.output_dir / "fig1_surface.csv"
    write_csv(surface, {"k": ks, "mu": mus, "survival": vals})
    return [str(curve), str(surface)]


def _figure2(cfg: RunConfig) -> list[str]:
    """Bounded-Pareto population pmf (beta=3, a=1/3, b=1, n=1000): empirical
    histogram, exact closed form, and the censoring cutoff curve with its
    first-order log-Taylor expansion about k = n mu b."""
    seed = int(cfg.require("master_seed"))
    replicates = cfg.replicates if cfg.replicates > 1 else 500
    n = 1000
    model = BoundedParetoModel(beta=3.0, a=1.0 / 3.0, b=1.0)
    mu = model.mean()
    law = pareto_population_pmf(model, n)
    pooled = np.zeros(n, dtype=np.int64)
    for sample in sample_population(model, None, n, replicates, seed):
        pooled += np.bincount(sample.degrees, minlength=n)[:n]
    empirical = pooled / (replicates * n)
    k = np.arange(n)
    # cutoff curve I_{mu b}(k+1-beta, n-k), defined for k > beta
    cutoff = np.full(n, np.nan)
    for kk in range(int(model.beta) + 1, n):
        cutoff[kk] = reg_inc_beta(mu * model.b, kk + 1 - model.beta, n - kk)
    # first-order Taylor of log-cutoff in k about k0 = n mu b
    k0 = int(round(n * mu * model.b))
    logc = np.log(np.clip(cutoff, 1e-300, None))
    slope = (logc[k0 + 1] - logc[k0 - 1]) / 2.0
    taylor = np.exp(logc[k0] + slope * (k - k0))
    with np.errstate(divide="ignore", invalid="ignore"):
        residual = np.where(
            (empirical > 0) & (law.pmf > 0),
            np.log(empirical) - np.log(law.pmf), np.nan,
        )
    path = cfg.output_dir / "fig2_pmf.csv"
    write_csv(path, {
        "k": k,
        "pmf_exact": law.pmf,
        "pmf_empirical": empirical,
        "cutoff": cutoff,
        "cutoff_taylor": taylor,
        "residual": residual,
    })
    return [str(path)]


def _figure3(cfg: RunConfig) -> list[str]:
    """Quadrature vs. reproduction-approximation pmfs, scaled by n mu, for
    the three shipped smooth densities at n=500."""
    n = 500
    outputs = []
    for name, coeffs in FIGURE3_DENSITIES.items():
        model = smooth_density_from_poly(coeffs)
        mu = model.mu
        quad_law = marginal_pmf_quadrature(model, n)
        repro = smooth_repro_pmf(model, n)
        k = np.arange(n, dtype=float)
        x = np.minimum(k / (n * mu), 1.0)
        path = cfg.output_dir / f"fig3_{name}.csv"
        write_csv(path, {
            "k": np.arange(n),
            "x": x,
            "f_x": np.array([model.f(v) for v in x]),
            "nmu_pmf_quadrature": n * mu * quad_law.pmf,
            "nmu_pmf_repro": n * mu * repro.pmf,
            "nmu_pmf_heuristic": n * mu * repro.extras["heuristic"],
        })
        outputs.append(str(path))
    return outputs


def cmd_figure(cfg: RunConfig, which: int) -> int:
    if which == 1:
        outputs = _figure1(cfg)
    elif which == 2:
        outputs = _figure2(cfg)
    elif which == 3:
        outputs = _figure3(cfg)
    else:
        raise ConfigError(f"figure must be 1, 2, or 3, got {which}")
    manifest = dict(_config_dict(cfg), figure=which)
    write_manifest(cfg.output_dir / f"fig{which}_manifest.json", manifest, outputs)
    return EXIT_OK


def cmd_estimate(cfg: RunConfig, args: argparse.Namespace) -> int:
    if bool(args.edges) == bool(args.degrees):
        raise ConfigError("provide exactly one of --edges or --degrees")
    if args.edges:
        degrees = read_edge_list(args.edges, one_indexed=args.one_indexed)
    else:
        degrees = read_degree_file(args.degrees)
    report = clt_report(degrees, level=args.level)
    path = cfg.output_dir / "estimates.csv"
    write_csv(path, {
        "index": np.arange(degrees.size),
        "degree": np.asarray(degrees),
        "pi_hat": report.pi_hat,
        "std_error": report.std_errors,
        "lo": report.intervals[:, 0],
        "hi": report.intervals[:, 1],
    })
    summary = {
        "degree_sum": report.degree_sum,
        "level": report.level,
        "small_degree_warning": report.small_degree_warning,
    }
    try:
        fit = fit_exponent(np.asarray(degrees))
        summary["exponent_fit"] = {
            "gamma_hat": fit.gamma_hat,
            "theta_hat": fit.theta_hat,
            "n_used": fit.n_used,
            "residual_std": fit.residual_std,
            "r_squared": fit.r_squared,
        }
    except DegreeNetError:
        summary["exponent_fit"] = None
    json_path = cfg.output_dir / "estimates.json"
    json_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    write_manifest(cfg.output_dir / "manifest.json",
                   dict(_config_dict(cfg), level=args.level),
                   [str(path), str(json_path)])
    return EXIT_OK


def cmd_verify(cfg: RunConfig, suite: str) -> int:
    results = run_suite(suite)
    report = {
        "suite": suite,
        "passed": all(r.passed for r in results),
        "checks": [r.as_dict() for r in results],
    }
    path = cfg.output_dir / f"verify_{suite}.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: measured={r.measured:.6g} bound={r.bound:.6g}")
    return EXIT_OK if report["passed"] else EXIT_VERIFICATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="degreenet",
        description="Degree-based random network models: distributions, "
                    "samplers, and estimation.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--n", type=int)
        p.add_argument("--replicates", type=int)
        p.add_argument("--master-seed", dest="master_seed", type=int)

    p = sub.add_parser("exact-pmf", help="write a degree-law CSV")
    common(p)
    p.add_argument("--law", choices=_LAWS)
    p.add_argument("--node", type=int)
    p.add_argument("--zeta", type=float)
    p.add_argument("--k-max", dest="k_max", type=int)

    p = sub.add_parser("simulate", help="sample replicate networks")
    common(p)
    p.add_argument("--sparse", action="store_true", default=None,
                   help="use the geometric-skipping sampler")

    p = sub.add_parser("figure", help="emit figure data CSVs")
    common(p)
    p.add_argument("--figure", type=int, required=True, choices=(1, 2, 3))

    p = sub.add_parser("estimate", help="estimate weights from observed degrees")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--edges", help="two-column whitespace-separated edge file")
    p.add_argument("--degrees", help="one-count-per-line degree file")
    p.add_argument("--one-indexed", action="store_true")
    p.add_argument("--level", type=float, default=0.95)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--suite", required=True, choices=("specfun", "oracle", "clt"))
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
        if args.command == "exact-pmf":
            return cmd_exact_pmf(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "figure":
            return cmd_figure(cfg, args.figure)
        if args.command == "estimate":
            return cmd_estimate(cfg, args)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite)
        raise ConfigError(f"unknown command {args.command!r}")
    except (NumericUnderflowError, QuadratureError, KMaxTooSmallError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DegreeNetError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
