"""Dependency-free SVG line chart for sweep results: mean evacuation time
against mean door delay, error bars of one standard deviation, and a
horizontal reference line at the certification threshold."""

import math
from xml.sax.saxutils import escape


class EmptyInput(ValueError):
    pass


_W, _H = 640, 420
_ML, _MR, _MT, _MB = 62, 18, 48, 52  # margins


def _nice_ticks(lo, hi, n=6):
    """A handful of round tick values covering [lo, hi]."""
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / max(1, n - 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + step * 1e-9:
        ticks.append(round(t, 10))
        t += step
    return ticks


def render_chart_svg(points, threshold: float = 90.0, manifest: str = "",
                     title: str = "Mean evacuation time vs mean door delay") -> str:
    """Render sweep points to an SVG document (returned as text).

    Each point draws a marker plus a +/- one-standard-deviation error bar;
    the threshold draws as a dashed horizontal line. Output is byte-stable
    for identical input.
    """
    points = list(points)
    if not points:
        raise EmptyInput("no sweep points to chart")

    xs = [p.mean_door_delay for p in points]
    los = [p.stats.mean - p.stats.std_dev for p in points]
    his = [p.stats.mean + p.stats.std_dev for p in points]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi - x_lo < 1e-12:  # single point: fixed margin
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    y_lo = min(min(los), threshold)
    y_hi = max(max(his), threshold)
    pad = 0.06 * (y_hi - y_lo) or 1.0
    y_lo -= pad
    y_hi += pad

    def sx(v):
        return _ML + (v - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def sy(v):
        return _H - _MB - (v - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    out = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
               f'viewBox="0 0 {_W} {_H}">')
    if manifest:
        out.append(f'<metadata id="manifest">{escape(manifest)}</metadata>')
    out.append(f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>')
    out.append(f'<text x="{_W / 2:.1f}" y="24" text-anchor="middle" '
               f'font-family="sans-serif" font-size="15">{escape(title)}</text>')

    # axes
    ax_y = _H - _MB
    out.append(f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{ax_y}" stroke="black"/>')
    out.append(f'<line x1="{_ML}" y1="{ax_y}" x2="{_W - _MR}" y2="{ax_y}" stroke="black"/>')
    for t in _nice_ticks(x_lo, x_hi):
        px = sx(t)
        out.append(f'<line x1="{px:.2f}" y1="{ax_y}" x2="{px:.2f}" y2="{ax_y + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{ax_y + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{t:g}</text>')
    for t in _nice_ticks(y_lo, y_hi):
        py = sy(t)
        out.append(f'<line x1="{_ML - 5}" y1="{py:.2f}" x2="{_ML}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{_ML - 8}" y="{py + 4:.2f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{t:g}</text>')
    out.append(f'<text x="{(_ML + _W - _MR) / 2:.1f}" y="{_H - 14}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">mean door delay D (s)</text>')
    out.append(f'<text x="16" y="{(_MT + ax_y) / 2:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 16 {(_MT + ax_y) / 2:.1f})">mean evacuation time (s)</text>')

    # threshold reference line
    ty = sy(threshold)
    out.append(f'<line id="threshold-line" x1="{_ML}" y1="{ty:.2f}" x2="{_W - _MR}" '
               f'y2="{ty:.2f}" stroke="red" stroke-dasharray="6 4"/>')
    out.append(f'<text x="{_W - _MR - 4}" y="{ty - 5:.2f}" text-anchor="end" '
               f'font-family="sans-serif" font-size="11" fill="red">{threshold:g} s</text>')

    # error bars, connecting line, markers
    for p, lo, hi in zip(points, los, his):
        px = sx(p.mean_door_delay)
        y1, y0 = sy(lo), sy(hi)
        out.append(f'<line x1="{px:.2f}" y1="{y0:.2f}" x2="{px:.2f}" y2="{y1:.2f}" '
                   f'stroke="steelblue"/>')
        out.append(f'<line x1="{px - 4:.2f}" y1="{y0:.2f}" x2="{px + 4:.2f}" y2="{y0:.2f}" '
                   f'stroke="steelblue"/>')
        out.append(f'<line x1="{px - 4:.2f}" y1="{y1:.2f}" x2="{px + 4:.2f}" y2="{y1:.2f}" '
                   f'stroke="steelblue"/>')
    if len(points) > 1:
        path = " ".join(f'{sx(p.mean_door_delay):.2f},{sy(p.stats.mean):.2f}' for p in points)
        out.append(f'<polyline points="{path}" fill="none" stroke="steelblue" stroke-width="1.5"/>')
    for p in points:
        out.append(f'<circle class="point" cx="{sx(p.mean_door_delay):.2f}" '
                   f'cy="{sy(p.stats.mean):.2f}" r="3.5" fill="steelblue"/>')

    out.append('</svg>')
    return "\n".join(out) + "\n"
