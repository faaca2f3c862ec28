"""Render degreenet CSV artifacts into deterministic SVG figures.

The only coupling to the producing package is the `degreenet-schema v1`
CSV format: a marker line, a header row, and full-precision numeric rows.
Anything that deviates fails loudly with a SchemaError naming the
offending file and column.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .svg import PALETTE, Axes, document

SCHEMA_MARKER = "# degreenet-schema v1"


class SchemaError(Exception):
    """Input CSV does not conform to degreenet-schema v1."""


def read_csv(path: Path, required: tuple[str, ...]) -> dict[str, list[float]]:
    """Read a schema-v1 CSV into float columns, validating marker and
    required columns."""
    if not path.exists():
        raise SchemaError(f"{path}: input file does not exist")
    lines = path.read_text().splitlines()
    if not lines or lines[0].strip() != SCHEMA_MARKER:
        raise SchemaError(
            f"{path}: missing schema marker line {SCHEMA_MARKER!r}"
        )
    if len(lines) < 2:
        raise SchemaError(f"{path}: no header row after the schema marker")
    header = [h.strip() for h in lines[1].split(",")]
    for col in required:
        if col not in header:
            raise SchemaError(f"{path}: missing required column '{col}'")
    columns: dict[str, list[float]] = {c: [] for c in required}
    index = {c: header.index(c) for c in required}
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise SchemaError(
                f"{path}: row at line {lineno} has {len(cells)} cells, "
                f"header has {len(header)}"
            )
        for col in required:
            cell = cells[index[col]].strip()
            try:
                columns[col].append(float(cell))
            except ValueError as exc:
                raise SchemaError(
                    f"{path}: non-numeric value {cell!r} in column "
                    f"'{col}' at line {lineno}"
                ) from exc
    return columns


@dataclass(frozen=True)
class FigureSpec:
    """One figure render: which figure, where its CSVs live, where the SVG
    goes, and which annotations to draw."""

    figure: int
    input_dir: Path
    output: Path
    midpoint_line: bool = True
    cutoff_overlay: bool = True
    inputs: dict = field(default_factory=dict)  # filled by render()


def _figure1(spec: FigureSpec) -> str:
    curve = read_csv(spec.input_dir / "fig1_curve.csv", ("k", "survival"))
    surface = read_csv(spec.input_dir / "fig1_surface.csv",
                       ("k", "mu", "survival"))
    n = len(curve["k"])
    left = Axes(x0=60, y0=40, width=320, height=280, xlim=(0.0, float(n)),
                ylim=(0.0, 1.0), xlabel="k", ylabel="survival probability",
                title=f"Binomial survival, n={n}, mu=0.5")
    left.polyline(curve["k"], curve["survival"], PALETTE["line"], width=2.0)
    if spec.midpoint_line:
        left.vline(n * 0.5, PALETTE["accent"])

    right = Axes(x0=470, y0=40, width=320, height=280, xlim=(0.0, float(n)),
                 ylim=(0.0, 1.0), xlabel="k", ylabel="survival probability",
                 title="survival curves across mu")
    by_mu: dict[float, tuple[list[float], list[float]]] = {}
    for k, mu, s in zip(surface["k"], surface["mu"], surface["survival"]):
        by_mu.setdefault(mu, ([], []))
        by_mu[mu][0].append(k)
        by_mu[mu][1].append(s)
    for mu in sorted(by_mu):
        ks, ss = by_mu[mu]
        right.polyline(ks, ss, PALETTE["muted"], width=0.8)
    if spec.midpoint_line:
        # the transition midpoints k = n*mu trace the diagonal
        right.polyline([0.0, float(n)], [0.0, 1.0], PALETTE["accent"],
                       width=1.0, dashed=True)
        right.legend([("k = n mu", PALETTE["accent"], True)])
    return document(840, 380, [left, right])


def _figure2(spec: FigureSpec) -> str:
    cols = read_csv(spec.input_dir / "fig2_pmf.csv",
                    ("k", "pmf_exact", "pmf_empirical", "cutoff",
                     "cutoff_taylor"))
    k = cols["k"]
    exact = cols["pmf_exact"]
    emp = cols["pmf_empirical"]
    peak = max(exact)
    left = Axes(x0=60, y0=40, width=320, height=280, xlim=(0.0, 700.0),
                ylim=(0.0, peak * 1.1), xlabel="k", ylabel="pmf",
                title="bounded-Pareto degree pmf")
    left.scatter(k, emp, PALETTE["muted"], radius=1.5)
    left.polyline(k, exact, PALETTE["line"], width=2.0)
    left.legend([("closed form", PALETTE["line"], False),
                 ("empirical", PALETTE["muted"], False)])

    right = Axes(x0=470, y0=40, width=320, height=280, xlim=(100.0, 700.0),
                 ylim=(1e-12, 1.0), xlabel="k", ylabel="pmf",
                 title="transition region (log-log)", xlog=True, ylog=True)
    right.scatter(k, emp, PALETTE["muted"], radius=1.5)
    right.polyline(k, exact, PALETTE["line"], width=2.0)
    legend = [("closed form", PALETTE["line"], False),
              ("empirical", PALETTE["muted"], False)]
    if spec.cutoff_overlay:
        right.polyline(k, cols["cutoff"], PALETTE["overlay"], width=1.2)
        right.polyline(k, cols["cutoff_taylor"], PALETTE["accent"],
                       width=1.2, dashed=True)
        legend += [("cutoff", PALETTE["overlay"], False),
                   ("cutoff expansion", PALETTE["accent"], True)]
    right.legend(legend)
    return document(840, 380, [left, right])


def _figure3(spec: FigureSpec) -> str:
    panels = []
    x0 = 60
    for name in ("linear", "quadratic", "cubic"):
        cols = read_csv(spec.input_dir / f"fig3_{name}.csv",
                        ("x", "f_x", "nmu_pmf_quadrature", "nmu_pmf_repro",
                         "nmu_pmf_heuristic"))
        top = max(max(cols["f_x"]), max(cols["nmu_pmf_quadrature"]))
        ax = Axes(x0=x0, y0=40, width=240, height=260, xlim=(0.0, 1.0),
                  ylim=(0.0, top * 1.1), xlabel="x = k / (n mu)",
                  ylabel="density scale" if name == "linear" else "",
                  title=f"{name} density")
        ax.polyline(cols["x"], cols["f_x"], PALETTE["muted"], width=1.2,
                    dashed=True)
        ax.polyline(cols["x"], cols["nmu_pmf_quadrature"], PALETTE["line"],
                    width=2.0)
        ax.polyline(cols["x"], cols["nmu_pmf_repro"], PALETTE["accent"],
                    width=1.4)
        if spec.cutoff_overlay:
            ax.polyline(cols["x"], cols["nmu_pmf_heuristic"],
                        PALETTE["overlay"], width=1.2, dashed=True)
        if name == "cubic":
            legend = [("mixing density", PALETTE["muted"], True),
                      ("quadrature", PALETTE["line"], False),
                      ("reproduction", PALETTE["accent"], False)]
            if spec.cutoff_overlay:
                legend.append(("heuristic", PALETTE["overlay"], True))
            ax.legend(legend)
        panels.append(ax)
        x0 += 320
    return document(1020, 360, panels)


_BUILDERS = {1: _figure1, 2: _figure2, 3: _figure3}


def render(spec: FigureSpec) -> str:
    """Pure function of (CSV contents, spec) to SVG text."""
    if spec.figure not in _BUILDERS:
        raise ValueError(f"figure must be 1, 2, or 3, got {spec.figure}")
    return _BUILDERS[spec.figure](spec)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render degreenet schema-v1 CSVs into SVG figures.",
    )
    parser.add_argument("--figure", type=int, required=True, choices=(1, 2, 3))
    parser.add_argument("--input-dir", required=True,
                        help="directory holding the figure CSVs")
    parser.add_argument("--out", required=True, help="output SVG path")
    parser.add_argument("--no-midpoint-line", action="store_true",
                        help="omit the k = n mu annotation")
    parser.add_argument("--no-overlay", action="store_true",
                        help="omit cutoff/heuristic overlays (curve-only)")
    args = parser.parse_args(argv)
    spec = FigureSpec(
        figure=args.figure,
        input_dir=Path(args.input_dir),
        output=Path(args.out),
        midpoint_line=not args.no_midpoint_line,
        cutoff_overlay=not args.no_overlay,
    )
    try:
        svg = render(spec)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    spec.output.write_text(svg)
    print(f"wrote {spec.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
