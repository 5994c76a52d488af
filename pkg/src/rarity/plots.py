"""Deterministic CSV and SVG emitters for sweep series.

The SVG is a schematic single-series line chart (axes, ticks, polyline,
optional horizontal threshold line) with no external references, so it is
well-formed standalone XML. Output bytes are a pure function of the inputs:
rerendering the same series yields the identical file.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .binomtail import SweepSeries

__all__ = ["sweep_csv", "svg_line_chart", "sweep_svg"]

_WIDTH = 960
_HEIGHT = 600
_MARGIN_L = 80
_MARGIN_R = 24
_MARGIN_T = 48
_MARGIN_B = 64


def sweep_csv(series: SweepSeries, stamp: str | None = None) -> str:
    """CSV text with header n,log10_p and one row per n (15 significant digits)."""
    lines = []
    if stamp:
        lines.append(f"# {stamp}")
    lines.append("n,log10_p")
    for pt in series.points:
        lines.append(f"{pt.n},{format(pt.log10_p, '.14e')}")
    return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def _tick_label(v: float) -> str:
    return f"{v:g}"


def svg_line_chart(
    points: list[tuple[float, float]],
    title: str,
    x_label: str,
    y_label: str,
    threshold: float | None = None,
) -> str:
    """A 960x600 line chart over (x, y) points; one polyline, labeled axes."""
    if not points:
        raise ValueError("need at least one point")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if threshold is not None:
        y_lo = min(y_lo, threshold)
        y_hi = max(y_hi, threshold)
    if x_hi == x_lo:
        x_hi = x_lo + 1
    if y_hi == y_lo:
        y_hi = y_lo + 1
    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def sx(x: float) -> float:
        return _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return _MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_WIDTH} {_HEIGHT}" '
        f'width="{_WIDTH}" height="{_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH // 2}" y="28" text-anchor="middle" font-family="sans-serif" '
        f'font-size="18">{escape(title)}</text>',
    ]
    axis_y = _MARGIN_T + plot_h
    parts.append(
        f'<line x1="{_MARGIN_L}" y1="{axis_y}" x2="{_MARGIN_L + plot_w}" y2="{axis_y}" '
        'stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" x2="{_MARGIN_L}" y2="{axis_y}" '
        'stroke="black" stroke-width="1"/>'
    )
    for tx in _ticks(x_lo, x_hi):
        px = sx(tx)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{axis_y}" x2="{_fmt(px)}" y2="{axis_y + 6}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{axis_y + 22}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{escape(_tick_label(tx))}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        py = sy(ty)
        parts.append(
            f'<line x1="{_MARGIN_L - 6}" y1="{_fmt(py)}" x2="{_MARGIN_L}" y2="{_fmt(py)}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 10}" y="{_fmt(py + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{escape(_tick_label(ty))}</text>'
        )
    parts.append(
        f'<text x="{_MARGIN_L + plot_w // 2}" y="{_HEIGHT - 16}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{escape(x_label)}</text>'
    )
    parts.append(
        f'<text x="20" y="{_MARGIN_T + plot_h // 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14" '
        f'transform="rotate(-90 20 {_MARGIN_T + plot_h // 2})">{escape(y_label)}</text>'
    )
    if threshold is not None:
        py = sy(threshold)
        parts.append(
            f'<line x1="{_MARGIN_L}" y1="{_fmt(py)}" x2="{_MARGIN_L + plot_w}" y2="{_fmt(py)}" '
            'stroke="red" stroke-width="1" stroke-dasharray="6,4"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L + plot_w - 4}" y="{_fmt(py - 6)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12" fill="red">'
            f'threshold {escape(_tick_label(threshold))}</text>'
        )
    if len(points) == 1:
        parts.append(
            f'<circle cx="{_fmt(sx(xs[0]))}" cy="{_fmt(sy(ys[0]))}" r="4" fill="steelblue"/>'
        )
    else:
        coords = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in points)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="steelblue" stroke-width="1.5"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def sweep_svg(series: SweepSeries, title: str, threshold: float | None = None) -> str:
    points = [(float(pt.n), float(pt.log10_p)) for pt in series.points]
    return svg_line_chart(
        points,
        title=title,
        x_label="n (samples)",
        y_label="log10 probability",
        threshold=threshold,
    )
