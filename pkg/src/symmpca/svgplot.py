"""Minimal SVG line plots with a logarithmic y axis."""

import math
from xml.sax.saxutils import escape

PALETTE = ["#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"]
FLOOR = 1e-17


def _panel(x0, y0, w, h, title, series, x_max):
    logs = [math.log10(max(v, FLOOR)) for _, xs, ys in series for v in ys]
    lo = math.floor(min(logs)) if logs else -16
    hi = math.ceil(max(logs)) if logs else 0
    if hi <= lo:
        hi = lo + 1
    x_max = max(x_max, 1)

    def px(x):
        return x0 + w * x / x_max

    def py(v):
        return y0 + h * (hi - math.log10(max(v, FLOOR))) / (hi - lo)

    out = [
        f'<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="none" stroke="#444"/>',
        f'<text x="{x0 + w / 2}" y="{y0 - 8}" text-anchor="middle" font-size="13">{escape(title)}</text>',
    ]
    step = max(1, (hi - lo) // 8)
    for e in range(lo, hi + 1, step):
        y = y0 + h * (hi - e) / (hi - lo)
        out.append(f'<line x1="{x0}" y1="{y:.1f}" x2="{x0 + w}" y2="{y:.1f}" stroke="#ddd"/>')
        out.append(f'<text x="{x0 - 4}" y="{y + 4:.1f}" text-anchor="end" font-size="10">1e{e}</text>')
    for frac in (0.0, 0.5, 1.0):
        x = x0 + w * frac
        out.append(f'<text x="{x:.1f}" y="{y0 + h + 14}" text-anchor="middle" font-size="10">{round(x_max * frac)}</text>')
    for k, (label, xs, ys) in enumerate(series):
        pts = " ".join(f"{px(x):.1f},{py(v):.1f}" for x, v in zip(xs, ys))
        color = PALETTE[k % len(PALETTE)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
    return out


def log_plot(panels, labels, path, width=900, height=380):
    """Write side-by-side log-y panels.

    ``panels`` is a list of ``(title, [(xs, ys), ...])`` with one curve per
    entry of ``labels``.
    """
    margin_l, margin_t, gap = 60, 30, 60
    legend_h = 18 * len(labels) + 10
    pw = (width - margin_l - gap * len(panels)) / len(panels)
    ph = height - margin_t - 40
    x_max = max((max(xs) for _, curves in panels for xs, _ in curves if len(xs)), default=1)
    body = []
    for i, (title, curves) in enumerate(panels):
        series = [(lab, xs, ys) for lab, (xs, ys) in zip(labels, curves)]
        body += _panel(margin_l + i * (pw + gap), margin_t, pw, ph, title, series, x_max)
    ly = height + 4
    for k, lab in enumerate(labels):
        color = PALETTE[k % len(PALETTE)]
        y = ly + 18 * k
        body.append(f'<line x1="{margin_l}" y1="{y}" x2="{margin_l + 24}" y2="{y}" stroke="{color}" stroke-width="2"/>')
        body.append(f'<text x="{margin_l + 30}" y="{y + 4}" font-size="11">{escape(lab)}</text>')
    total_h = height + legend_h
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{total_h}" '
            f'font-family="sans-serif">\n'
        )
        fh.write("\n".join(body))
        fh.write("\n</svg>\n")
