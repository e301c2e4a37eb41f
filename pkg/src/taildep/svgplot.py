"""Dependency-free SVG line charts for the metric curves.

Only what the plot command needs: one chart per metric, a polyline per
estimator with a fixed color/dash identity, linear or log y axis, and a
legend. Output is a static standalone SVG file.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

WIDTH = 720
HEIGHT = 520
MARGIN_LEFT = 78
MARGIN_RIGHT = 180
MARGIN_TOP = 48
MARGIN_BOTTOM = 58


@dataclass(frozen=True)
class Series:
    label: str
    color: str
    dash: str | None
    xs: tuple[float, ...]
    ys: tuple[float, ...]


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 2.5, 5, 10):
        step = mult * mag
        if raw <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def render_line_chart(
    series: list[Series],
    *,
    title: str,
    x_label: str,
    y_label: str,
    log_y: bool = False,
) -> str:
    """Render the chart and return SVG text."""
    xs_all = [x for s in series for x in s.xs]
    ys_all = [y for s in series for y in s.ys if math.isfinite(y)]
    if log_y:
        ys_all = [y for y in ys_all if y > 0]
    if not xs_all or not ys_all:
        xs_all, ys_all = [0.0, 1.0], [0.0, 1.0]

    x_lo, x_hi = min(xs_all), max(xs_all)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if log_y:
        y_lo, y_hi = math.log10(min(ys_all)), math.log10(max(ys_all))
    else:
        y_lo, y_hi = min(0.0, min(ys_all)), max(ys_all)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x: float) -> float:
        return MARGIN_LEFT + plot_w * (x - x_lo) / (x_hi - x_lo)

    def py(y: float) -> float:
        yy = math.log10(y) if log_y else y
        return MARGIN_TOP + plot_h * (1.0 - (yy - y_lo) / (y_hi - y_lo))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{MARGIN_LEFT}" y="24" font-size="15">{escape(title)}</text>',
    ]

    # Axes and ticks.
    x0, y0 = MARGIN_LEFT, MARGIN_TOP + plot_h
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="black"/>')
    parts.append(f'<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="black"/>')
    for t in _nice_ticks(x_lo, x_hi):
        tx = px(t)
        parts.append(f'<line x1="{tx:.2f}" y1="{y0}" x2="{tx:.2f}" y2="{y0 + 5}" stroke="black"/>')
        parts.append(f'<text x="{tx:.2f}" y="{y0 + 20}" text-anchor="middle">{_fmt(t)}</text>')
    if log_y:
        lo_exp, hi_exp = math.floor(y_lo), math.ceil(y_hi)
        tick_vals = [10.0**e for e in range(lo_exp, hi_exp + 1)]
    else:
        tick_vals = _nice_ticks(y_lo, y_hi)
    for t in tick_vals:
        if log_y and not (10**y_lo <= t <= 10**y_hi):
            continue
        ty = py(t)
        parts.append(f'<line x1="{x0 - 5}" y1="{ty:.2f}" x2="{x0}" y2="{ty:.2f}" stroke="black"/>')
        parts.append(
            f'<text x="{x0 - 9}" y="{ty + 4:.2f}" text-anchor="end">{_fmt(t)}</text>'
        )
    parts.append(
        f'<text x="{x0 + plot_w / 2:.2f}" y="{HEIGHT - 14}" text-anchor="middle">{escape(x_label)}</text>'
    )
    parts.append(
        f'<text x="18" y="{MARGIN_TOP + plot_h / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2:.2f})">{escape(y_label)}</text>'
    )

    # Series.
    for s in series:
        pts = [
            (px(x), py(y))
            for x, y in zip(s.xs, s.ys)
            if math.isfinite(y) and (not log_y or y > 0)
        ]
        if not pts:
            continue
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{s.color}" stroke-width="1.8"{dash}/>'
        )

    # Legend.
    lx = MARGIN_LEFT + plot_w + 14
    ly = MARGIN_TOP + 6
    for i, s in enumerate(series):
        yy = ly + 18 * i
        dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
        parts.append(
            f'<line x1="{lx}" y1="{yy}" x2="{lx + 26}" y2="{yy}" stroke="{s.color}" '
            f'stroke-width="1.8"{dash}/>'
        )
        parts.append(f'<text x="{lx + 32}" y="{yy + 4}">{escape(s.label)}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
