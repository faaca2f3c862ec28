"""Minimal deterministic SVG drawing: fixed styles, fixed number
formatting, no timestamps, so identical inputs yield identical bytes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

PALETTE = {
    "line": "#1f4e79",
    "accent": "#c0392b",
    "muted": "#8a8a8a",
    "overlay": "#2e8b57",
    "grid": "#dddddd",
}

FONT = "font-family=\"Helvetica,Arial,sans-serif\""


def fmt(x: float) -> str:
    """Fixed two-decimal coordinate formatting (stable across platforms)."""
    if not math.isfinite(x):
        raise ValueError(f"non-finite coordinate {x!r}")
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _tick_values(lo: float, hi: float, target: int = 5) -> list[float]:
    """Round tick positions covering [lo, hi]."""
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if step >= raw:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


def _tick_label(v: float) -> str:
    if v == int(v) and abs(v) < 1e7:
        return str(int(v))
    return f"{v:.3g}"


@dataclass
class Axes:
    """One panel: a data window mapped onto a pixel rectangle."""

    x0: float
    y0: float
    width: float
    height: float
    xlim: tuple[float, float]
    ylim: tuple[float, float]
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""
    xlog: bool = False
    ylog: bool = False
    elements: list[str] = field(default_factory=list)

    def _tx(self, x: float) -> float:
        lo, hi = self.xlim
        if self.xlog:
            x, lo, hi = math.log10(x), math.log10(lo), math.log10(hi)
        return self.x0 + (x - lo) / (hi - lo) * self.width

    def _ty(self, y: float) -> float:
        lo, hi = self.ylim
        if self.ylog:
            y, lo, hi = math.log10(y), math.log10(lo), math.log10(hi)
        return self.y0 + self.height - (y - lo) / (hi - lo) * self.height

    def _visible(self, x: float, y: float) -> bool:
        if self.xlog and x <= 0:
            return False
        if self.ylog and y <= 0:
            return False
        return self.xlim[0] <= x <= self.xlim[1] and self.ylim[0] <= y <= self.ylim[1]

    def polyline(self, xs, ys, color: str, width: float = 1.5,
                 dashed: bool = False) -> None:
        """Draw connected segments, breaking the line at clipped points."""
        dash = " stroke-dasharray=\"6,4\"" if dashed else ""
        run: list[str] = []
        runs: list[list[str]] = []
        for x, y in zip(xs, ys):
            if self._visible(x, y) and math.isfinite(x) and math.isfinite(y):
                run.append(f"{fmt(self._tx(x))},{fmt(self._ty(y))}")
            elif run:
                runs.append(run)
                run = []
        if run:
            runs.append(run)
        for pts in runs:
            if len(pts) < 2:
                continue
            self.elements.append(
                f'<polyline points="{" ".join(pts)}" fill="none" '
                f'stroke="{color}" stroke-width="{fmt(width)}"{dash}/>'
            )

    def scatter(self, xs, ys, color: str, radius: float = 2.0) -> None:
        for x, y in zip(xs, ys):
            if self._visible(x, y) and math.isfinite(x) and math.isfinite(y):
                self.elements.append(
                    f'<circle cx="{fmt(self._tx(x))}" cy="{fmt(self._ty(y))}" '
                    f'r="{fmt(radius)}" fill="{color}"/>'
                )

    def vline(self, x: float, color: str, dashed: bool = True) -> None:
        if not self.xlim[0] <= x <= self.xlim[1]:
            return
        px = fmt(self._tx(x))
        dash = " stroke-dasharray=\"4,3\"" if dashed else ""
        self.elements.append(
            f'<line x1="{px}" y1="{fmt(self.y0)}" x2="{px}" '
            f'y2="{fmt(self.y0 + self.height)}" stroke="{color}" '
            f'stroke-width="1.00"{dash}/>'
        )

    def _log_ticks(self, lo: float, hi: float) -> list[float]:
        lo_e = math.ceil(math.log10(lo) - 1e-9)
        hi_e = math.floor(math.log10(hi) + 1e-9)
        return [10.0**e for e in range(lo_e, hi_e + 1)]

    def frame(self) -> list[str]:
        """Axes box, ticks, labels, title. Emitted before data elements."""
        out = [
            f'<rect x="{fmt(self.x0)}" y="{fmt(self.y0)}" '
            f'width="{fmt(self.width)}" height="{fmt(self.height)}" '
            f'fill="white" stroke="#333333" stroke-width="1.00"/>'
        ]
        xticks = (self._log_ticks(*self.xlim) if self.xlog
                  else _tick_values(*self.xlim))
        for v in xticks:
            px = fmt(self._tx(v))
            py = self.y0 + self.height
            out.append(
                f'<line x1="{px}" y1="{fmt(py)}" x2="{px}" y2="{fmt(py + 4)}" '
                f'stroke="#333333" stroke-width="1.00"/>'
            )
            label = (f"1e{int(math.log10(v))}" if self.xlog else _tick_label(v))
            out.append(
                f'<text x="{px}" y="{fmt(py + 15)}" font-size="10" '
                f'{FONT} text-anchor="middle">{label}</text>'
            )
        yticks = (self._log_ticks(*self.ylim) if self.ylog
                  else _tick_values(*self.ylim))
        for v in yticks:
            py = fmt(self._ty(v))
            out.append(
                f'<line x1="{fmt(self.x0 - 4)}" y1="{py}" x2="{fmt(self.x0)}" '
                f'y2="{py}" stroke="#333333" stroke-width="1.00"/>'
            )
            label = (f"1e{int(math.log10(v))}" if self.ylog else _tick_label(v))
            out.append(
                f'<text x="{fmt(self.x0 - 7)}" y="{fmt(float(py) + 3.5)}" '
                f'font-size="10" {FONT} text-anchor="end">{label}</text>'
            )
        if self.xlabel:
            out.append(
                f'<text x="{fmt(self.x0 + self.width / 2)}" '
                f'y="{fmt(self.y0 + self.height + 32)}" font-size="11" '
                f'{FONT} text-anchor="middle">{self.xlabel}</text>'
            )
        if self.ylabel:
            cx = fmt(self.x0 - 40)
            cy = fmt(self.y0 + self.height / 2)
            out.append(
                f'<text x="{cx}" y="{cy}" font-size="11" {FONT} '
                f'text-anchor="middle" transform="rotate(-90 {cx} {cy})">'
                f"{self.ylabel}</text>"
            )
        if self.title:
            out.append(
                f'<text x="{fmt(self.x0 + self.width / 2)}" '
                f'y="{fmt(self.y0 - 8)}" font-size="12" {FONT} '
                f'text-anchor="middle">{self.title}</text>'
            )
        return out

    def legend(self, entries: list[tuple[str, str, bool]]) -> None:
        """entries: (label, color, dashed) drawn inside the top-right corner."""
        x = self.x0 + self.width - 140
        y = self.y0 + 12
        for i, (label, color, dashed) in enumerate(entries):
            ly = y + 14 * i
            dash = " stroke-dasharray=\"6,4\"" if dashed else ""
            self.elements.append(
                f'<line x1="{fmt(x)}" y1="{fmt(ly)}" x2="{fmt(x + 22)}" '
                f'y2="{fmt(ly)}" stroke="{color}" stroke-width="2.00"{dash}/>'
            )
            self.elements.append(
                f'<text x="{fmt(x + 27)}" y="{fmt(ly + 3.5)}" font-size="10" '
                f'{FONT}>{label}</text>'
            )


def document(width: float, height: float, axes: list[Axes]) -> str:
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{fmt(width)}" '
        f'height="{fmt(height)}" viewBox="0 0 {fmt(width)} {fmt(height)}">',
        f'<rect x="0" y="0" width="{fmt(width)}" height="{fmt(height)}" '
        f'fill="white"/>',
    ]
    for ax in axes:
        parts.extend(ax.frame())
        parts.extend(ax.elements)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
