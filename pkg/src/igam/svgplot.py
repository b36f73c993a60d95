"""Minimal self-contained SVG plots.

Every figure embeds its numeric data as a structured XML comment
(``<!-- data ... -->``) so tests and downstream tools can scrape values
without an image pipeline.  Only the handful of plot kinds the reports need
are implemented: scatter with an optional fit line, multi-series curves on
log axes, a block heat map, and a layered node layout.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

__all__ = [
    "scatter_svg",
    "curves_svg",
    "heatmap_svg",
    "layered_layout_svg",
    "extract_data_comment",
]

_W, _H = 640, 480
_MARGIN = 60
_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _data_comment(header, rows):
    lines = [",".join(str(v) for v in row) for row in rows]
    body = "\n".join(["data", ",".join(header)] + lines)
    # '--' is illegal inside XML comments; numeric CSV never produces it,
    # but guard against pathological labels
    return "<!-- " + body.replace("--", "door-dash") + " -->"


def _axis_transform(values, log):
    vals = np.asarray(values, dtype=float)
    if log:
        vals = np.log10(vals)
    lo, hi = float(vals.min()), float(vals.max())
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return vals, lo - pad, hi + pad


def _doc(elements, comment):
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">\n'
        + comment + "\n"
        + f'<rect width="{_W}" height="{_H}" fill="white"/>\n'
        + "\n".join(elements)
        + "\n</svg>\n"
    )


def _frame(title, x_label, y_label):
    els = [
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{_W - 2 * _MARGIN}" '
        f'height="{_H - 2 * _MARGIN}" fill="none" stroke="black"/>',
        f'<text x="{_W / 2:.0f}" y="24" text-anchor="middle" '
        f'font-size="15">{escape(title)}</text>',
        f'<text x="{_W / 2:.0f}" y="{_H - 12}" text-anchor="middle" '
        f'font-size="12">{escape(x_label)}</text>',
        f'<text x="16" y="{_H / 2:.0f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {_H / 2:.0f})">{escape(y_label)}</text>',
    ]
    return els


def _scale(v, lo, hi, pixel_lo, pixel_hi):
    frac = (v - lo) / (hi - lo)
    return pixel_lo + frac * (pixel_hi - pixel_lo)


def scatter_svg(x, y, title="", x_label="x", y_label="y",
                fit=None, annotations=()):
    """Scatter plot; ``fit=(slope, intercept)`` draws a regression line.

    Data points (and the fit parameters, when given) are embedded in the
    data comment.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xs, xlo, xhi = _axis_transform(x, log=False)
    ys, ylo, yhi = _axis_transform(y, log=False)
    els = _frame(title, x_label, y_label)
    for xi, yi in zip(xs, ys):
        px = _scale(xi, xlo, xhi, _MARGIN, _W - _MARGIN)
        py = _scale(yi, ylo, yhi, _H - _MARGIN, _MARGIN)
        els.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3.5" '
                   f'fill="{_COLORS[0]}"/>')
    rows = [(float(a), float(b)) for a, b in zip(x, y)]
    header = [x_label.replace(",", ";"), y_label.replace(",", ";")]
    if fit is not None:
        slope, intercept = fit
        y0, y1 = slope * xlo + intercept, slope * xhi + intercept
        p0x = _scale(xlo, xlo, xhi, _MARGIN, _W - _MARGIN)
        p1x = _scale(xhi, xlo, xhi, _MARGIN, _W - _MARGIN)
        p0y = _scale(y0, ylo, yhi, _H - _MARGIN, _MARGIN)
        p1y = _scale(y1, ylo, yhi, _H - _MARGIN, _MARGIN)
        els.append(f'<line x1="{p0x:.2f}" y1="{p0y:.2f}" x2="{p1x:.2f}" '
                   f'y2="{p1y:.2f}" stroke="{_COLORS[1]}" stroke-width="1.5"/>')
        rows.append(("slope", float(slope)))
        rows.append(("intercept", float(intercept)))
    for i, text in enumerate(annotations):
        els.append(f'<text x="{_MARGIN + 10}" y="{_MARGIN + 18 + 16 * i}" '
                   f'font-size="12">{escape(text)}</text>')
    return _doc(els, _data_comment(header, rows))


def curves_svg(series, title="", x_label="x", y_label="y",
               log_x=True, log_y=True):
    """Plot named (x, y) series; log-log by default.

    ``series`` is a list of ``(name, x, y)``; nonpositive points are
    dropped on log axes.  The data comment lists every point as
    ``name,x,y``.
    """
    cleaned = []
    for name, x, y in series:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        keep = np.ones(x.size, dtype=bool)
        if log_x:
            keep &= x > 0
        if log_y:
            keep &= y > 0
        cleaned.append((name, x[keep], y[keep]))
    all_x = np.concatenate([x for _, x, _ in cleaned if x.size])
    all_y = np.concatenate([y for _, _, y in cleaned if y.size])
    _, xlo, xhi = _axis_transform(all_x, log=log_x)
    _, ylo, yhi = _axis_transform(all_y, log=log_y)
    els = _frame(title, x_label, y_label)
    rows = []
    for idx, (name, x, y) in enumerate(cleaned):
        color = _COLORS[idx % len(_COLORS)]
        tx = np.log10(x) if log_x else x
        ty = np.log10(y) if log_y else y
        points = []
        for xi, yi in zip(tx, ty):
            px = _scale(xi, xlo, xhi, _MARGIN, _W - _MARGIN)
            py = _scale(yi, ylo, yhi, _H - _MARGIN, _MARGIN)
            points.append(f"{px:.2f},{py:.2f}")
        if points:
            els.append(f'<polyline fill="none" stroke="{color}" '
                       f'stroke-width="1.5" points="{" ".join(points)}"/>')
        els.append(f'<text x="{_W - _MARGIN - 150}" y="{_MARGIN + 18 + 16 * idx}" '
                   f'font-size="12" fill="{color}">{escape(str(name))}</text>')
        rows.extend((str(name).replace(",", ";"), float(a), float(b))
                    for a, b in zip(x, y))
    return _doc(els, _data_comment(["series", x_label.replace(",", ";"),
                                    y_label.replace(",", ";")], rows))


def heatmap_svg(matrix, title="", x_label="column", y_label="row"):
    """Gray-scale block heat map of a small matrix (dark = large)."""
    m = np.asarray(matrix, dtype=float)
    top = m.max() if m.size and m.max() > 0 else 1.0
    rows_n, cols_n = m.shape
    cell_w = (_W - 2 * _MARGIN) / cols_n
    cell_h = (_H - 2 * _MARGIN) / rows_n
    els = _frame(title, x_label, y_label)
    for i in range(rows_n):
        for j in range(cols_n):
            shade = int(round(255 * (1.0 - min(m[i, j] / top, 1.0))))
            els.append(
                f'<rect x="{_MARGIN + j * cell_w:.2f}" y="{_MARGIN + i * cell_h:.2f}" '
                f'width="{cell_w:.2f}" height="{cell_h:.2f}" '
                f'fill="rgb({shade},{shade},{shade})"/>')
    rows = [(i, j, float(m[i, j])) for i in range(rows_n) for j in range(cols_n)]
    return _doc(els, _data_comment(["row", "col", "value"], rows))


def layered_layout_svg(g, heights, title="", max_edges=4000):
    """Rows-by-level node layout with (capped) edges drawn between layers."""
    h = np.asarray(heights.heights if hasattr(heights, "heights") else heights)
    H = int(h.max())
    positions = np.zeros((g.n, 2))
    rng = np.random.default_rng(0)
    for level in range(H + 1):
        nodes = np.nonzero(h == level)[0]
        if nodes.size == 0:
            continue
        ys = _MARGIN + (_H - 2 * _MARGIN) * level / max(H, 1)
        xs = np.linspace(_MARGIN, _W - _MARGIN, nodes.size + 2)[1:-1]
        jitter = rng.uniform(-4, 4, nodes.size) if nodes.size > 1 else [0.0]
        positions[nodes, 0] = xs + jitter
        positions[nodes, 1] = ys
    els = _frame(title, "", "prestige level (top = 0)")
    e = g.edges()
    if e.shape[0] > max_edges:
        pick = np.linspace(0, e.shape[0] - 1, max_edges).astype(int)
        e = e[pick]
    for u, v in e:
        els.append(f'<line x1="{positions[u, 0]:.1f}" y1="{positions[u, 1]:.1f}" '
                   f'x2="{positions[v, 0]:.1f}" y2="{positions[v, 1]:.1f}" '
                   f'stroke="#99aacc" stroke-width="0.3"/>')
    for u in range(g.n):
        shade = int(200 * h[u] / max(H, 1))
        els.append(f'<circle cx="{positions[u, 0]:.1f}" cy="{positions[u, 1]:.1f}" '
                   f'r="2.5" fill="rgb({shade},{shade},255)"/>')
    rows = [(u, int(h[u])) for u in range(g.n)]
    return _doc(els, _data_comment(["node", "level"], rows))


def extract_data_comment(svg_text):
    """Parse the embedded data comment back into (header, rows of strings)."""
    start = svg_text.index("<!-- data")
    end = svg_text.index(" -->", start)
    lines = svg_text[start + len("<!-- "):end].splitlines()
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return header, rows
