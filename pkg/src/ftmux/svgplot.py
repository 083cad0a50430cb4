"""Minimal deterministic SVG line plots.

Rendering is pure string assembly with fixed-precision coordinates and no
timestamps or random ids, so the same data always yields the same bytes.
Only what the sweep figures need is implemented: multiple labeled series,
optionally log-scaled axes, decade or 1-2-5 ticks, and a legend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

WIDTH, HEIGHT = 720, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 84, 18, 34, 56

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
    "#bcbd22", "#e377c2",
)


class PlotError(ValueError):
    """Nothing plottable in the input."""


@dataclass(frozen=True)
class Series:
    label: str
    xs: tuple[float, ...]
    ys: tuple[float, ...]
    dashed: bool = False


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _nice_ticks(lo: float, hi: float) -> list[float]:
    """Around five 1-2-5 ladder ticks covering [lo, hi]."""
    if hi <= lo:
        hi = lo + 1.0
    raw_step = (hi - lo) / 5.0
    mag = 10.0 ** math.floor(math.log10(raw_step))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if raw_step <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < step * 1e-9 else t)
        t += step
    return ticks


def _decade_ticks(lo: float, hi: float) -> list[float]:
    lo_k = math.floor(math.log10(lo))
    hi_k = math.ceil(math.log10(hi))
    return [10.0 ** k for k in range(lo_k, hi_k + 1)]


def _tick_label(value: float) -> str:
    return f"{value:g}"


class _Axis:
    def __init__(self, lo: float, hi: float, log: bool, px_lo: float, px_hi: float):
        self.log = log
        if log:
            self.lo, self.hi = math.log10(lo), math.log10(hi)
        else:
            self.lo, self.hi = lo, hi
        if self.hi <= self.lo:
            self.hi = self.lo + 1.0
        self.px_lo, self.px_hi = px_lo, px_hi

    def place(self, value: float) -> float:
        v = math.log10(value) if self.log else value
        frac = (v - self.lo) / (self.hi - self.lo)
        return self.px_lo + frac * (self.px_hi - self.px_lo)


def render_line_plot(
    series: list[Series],
    *,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    x_log: bool = False,
    y_log: bool = True,
) -> str:
    """Assemble the SVG document; raises PlotError if no point is drawable."""
    cleaned: list[Series] = []
    for s in series:
        pts = [
            (x, y)
            for x, y in zip(s.xs, s.ys)
            if math.isfinite(x) and math.isfinite(y)
            and (not x_log or x > 0.0) and (not y_log or y > 0.0)
        ]
        if pts:
            cleaned.append(Series(s.label,
                                  tuple(p[0] for p in pts),
                                  tuple(p[1] for p in pts),
                                  s.dashed))
    if not cleaned:
        raise PlotError("no drawable data points")

    all_x = [x for s in cleaned for x in s.xs]
    all_y = [y for s in cleaned for y in s.ys]
    x_axis = _Axis(min(all_x), max(all_x), x_log, MARGIN_LEFT, WIDTH - MARGIN_RIGHT)
    y_axis = _Axis(min(all_y), max(all_y), y_log, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH // 2}" y="20" text-anchor="middle" '
            f'font-size="14">{_escape(title)}</text>'
        )

    # gridlines and tick labels
    x_lo_v, x_hi_v = min(all_x), max(all_x)
    y_lo_v, y_hi_v = min(all_y), max(all_y)
    x_ticks = _decade_ticks(x_lo_v, x_hi_v) if x_log else _nice_ticks(x_lo_v, x_hi_v)
    y_ticks = _decade_ticks(y_lo_v, y_hi_v) if y_log else _nice_ticks(y_lo_v, y_hi_v)
    plot_top, plot_bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM
    plot_left, plot_right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    for tick in x_ticks:
        if x_log:
            lo10, hi10 = 10.0 ** x_axis.lo, 10.0 ** x_axis.hi
            if not lo10 * (1 - 1e-12) <= tick <= hi10 * (1 + 1e-12):
                continue
        elif not x_lo_v - 1e-12 <= tick <= x_hi_v + 1e-12:
            continue
        px = _fmt(x_axis.place(tick))
        parts.append(
            f'<line x1="{px}" y1="{plot_top}" x2="{px}" y2="{plot_bottom}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px}" y="{plot_bottom + 16}" text-anchor="middle">'
            f'{_tick_label(tick)}</text>'
        )
    for tick in y_ticks:
        if y_log:
            lo10, hi10 = 10.0 ** y_axis.lo, 10.0 ** y_axis.hi
            if not lo10 * (1 - 1e-12) <= tick <= hi10 * (1 + 1e-12):
                continue
        elif not y_lo_v - 1e-12 <= tick <= y_hi_v + 1e-12:
            continue
        py = _fmt(y_axis.place(tick))
        parts.append(
            f'<line x1="{plot_left}" y1="{py}" x2="{plot_right}" y2="{py}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{plot_left - 6}" y="{py}" text-anchor="end" '
            f'dominant-baseline="middle">{_tick_label(tick)}</text>'
        )

    # axes frame
    parts.append(
        f'<rect x="{plot_left}" y="{plot_top}" width="{plot_right - plot_left}" '
        f'height="{plot_bottom - plot_top}" fill="none" stroke="#333333"/>'
    )
    if x_label:
        parts.append(
            f'<text x="{(plot_left + plot_right) // 2}" y="{HEIGHT - 12}" '
            f'text-anchor="middle">{_escape(x_label)}</text>'
        )
    if y_label:
        cx, cy = 20, (plot_top + plot_bottom) // 2
        parts.append(
            f'<text x="{cx}" y="{cy}" text-anchor="middle" '
            f'transform="rotate(-90 {cx} {cy})">{_escape(y_label)}</text>'
        )

    # curves
    for idx, s in enumerate(cleaned):
        color = PALETTE[idx % len(PALETTE)]
        coords = " ".join(
            f"{_fmt(x_axis.place(x))},{_fmt(y_axis.place(y))}"
            for x, y in zip(s.xs, s.ys)
        )
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"{dash}/>'
        )

    # legend, top-right inside the frame
    legend_x = plot_right - 190
    legend_y = plot_top + 10
    for idx, s in enumerate(cleaned):
        color = PALETTE[idx % len(PALETTE)]
        y = legend_y + 16 * idx
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        parts.append(
            f'<line x1="{legend_x}" y1="{y}" x2="{legend_x + 24}" y2="{y}" '
            f'stroke="{color}" stroke-width="1.5"{dash}/>'
        )
        parts.append(
            f'<text x="{legend_x + 30}" y="{y + 4}">{_escape(s.label)}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
