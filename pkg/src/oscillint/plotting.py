"""A small log-log SVG plotter for ladder data."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

_W, _H, _PAD = 480, 360, 56
_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _ticks(lo: float, hi: float):
    a, b = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
    return [10.0 ** k for k in range(a, b + 1)]


def loglog_svg(series, title: str = "", xlabel: str = "lambda", ylabel: str = "value",
               reference_slope: float | None = None) -> str:
    """Render ``series = [(label, xs, ys), ...]`` on log-log axes.

    With ``reference_slope`` a dashed line of that slope is drawn through
    the first point of the first series.
    """
    pts = [(x, y) for _, xs, ys in series for x, y in zip(xs, ys) if x > 0 and y > 0]
    if not pts:
        raise ValueError("nothing positive to plot")
    lx = [math.log10(x) for x, _ in pts]
    ly = [math.log10(y) for _, y in pts]
    x0, x1 = min(lx) - 0.1, max(lx) + 0.1
    y0, y1 = min(ly) - 0.2, max(ly) + 0.2

    def px(x):
        return _PAD + (math.log10(x) - x0) / (x1 - x0) * (_W - 2 * _PAD)

    def py(y):
        return _H - _PAD - (math.log10(y) - y0) / (y1 - y0) * (_H - 2 * _PAD)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" font-family="sans-serif" font-size="11">',
           f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
           f'<rect x="{_PAD}" y="{_PAD}" width="{_W - 2 * _PAD}" height="{_H - 2 * _PAD}" fill="none" stroke="black"/>']
    if title:
        out.append(f'<text x="{_W / 2}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>')
    out.append(f'<text x="{_W / 2}" y="{_H - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="14" y="{_H / 2}" text-anchor="middle" transform="rotate(-90 14 {_H / 2})">{escape(ylabel)}</text>')
    for t in _ticks(10 ** x0, 10 ** x1):
        if x0 <= math.log10(t) <= x1:
            out.append(f'<text x="{px(t):.1f}" y="{_H - _PAD + 14}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(10 ** y0, 10 ** y1):
        if y0 <= math.log10(t) <= y1:
            out.append(f'<text x="{_PAD - 4}" y="{py(t) + 4:.1f}" text-anchor="end">{t:g}</text>')
    for i, (label, xs, ys) in enumerate(series):
        c = _COLORS[i % len(_COLORS)]
        xy = [(px(x), py(y)) for x, y in zip(xs, ys) if x > 0 and y > 0]
        out.append('<polyline fill="none" stroke="%s" points="%s"/>' % (c, " ".join(f"{a:.1f},{b:.1f}" for a, b in xy)))
        out.extend(f'<circle cx="{a:.1f}" cy="{b:.1f}" r="3" fill="{c}"/>' for a, b in xy)
        out.append(f'<text x="{_W - _PAD - 4}" y="{_PAD + 14 * (i + 1)}" text-anchor="end" fill="{c}">{escape(label)}</text>')
    if reference_slope is not None:
        _, xs, ys = series[0]
        xa, xb = 10 ** x0, 10 ** x1
        ya = ys[0] * (xa / xs[0]) ** reference_slope
        yb = ys[0] * (xb / xs[0]) ** reference_slope
        out.append(f'<line x1="{px(xa):.1f}" y1="{py(ya):.1f}" x2="{px(xb):.1f}" y2="{py(yb):.1f}" '
                   f'stroke="gray" stroke-dasharray="5,4"/>')
        out.append(f'<text x="{_PAD + 4}" y="{_PAD + 14}" fill="gray">reference slope {reference_slope:g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
