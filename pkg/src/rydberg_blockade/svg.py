"""Self-contained SVG heat maps and line plots (no plotting dependency)."""

from xml.sax.saxutils import escape

import numpy as np

# viridis anchors, interpolated linearly
_RAMP = np.array(
    [
        [68, 1, 84],
        [72, 40, 120],
        [62, 74, 137],
        [49, 104, 142],
        [38, 130, 142],
        [31, 158, 137],
        [53, 183, 121],
        [109, 205, 89],
        [180, 222, 44],
        [253, 231, 37],
    ],
    dtype=float,
)
_LINE_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"]
_NAN_COLOR = "#bbbbbb"

WIDTH, HEIGHT = 640, 480
MARGIN = dict(left=70, right=110, top=40, bottom=60)


def color(u):
    """Ramp color for ``u`` in [0, 1] as ``#rrggbb``; NaN maps to grey."""
    if not np.isfinite(u):
        return _NAN_COLOR
    u = min(max(float(u), 0.0), 1.0) * (len(_RAMP) - 1)
    i = min(int(u), len(_RAMP) - 2)
    c = _RAMP[i] + (u - i) * (_RAMP[i + 1] - _RAMP[i])
    return "#%02x%02x%02x" % tuple(int(round(v)) for v in c)


def _ticks(lo, hi, n=5):
    return np.linspace(lo, hi, n)


def _frame(title, xlabel, ylabel, xr, yr, px, py):
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = MARGIN["top"], HEIGHT - MARGIN["bottom"]
    out = [
        f'<rect x="{x0}" y="{y0}" width="{x1 - x0}" height="{y1 - y0}" fill="none" stroke="black"/>',
        f'<text x="{(x0 + x1) / 2}" y="{y0 - 12}" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<text x="{(x0 + x1) / 2}" y="{HEIGHT - 15}" text-anchor="middle" font-size="13">{escape(xlabel)}</text>',
        f'<text x="18" y="{(y0 + y1) / 2}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {(y0 + y1) / 2})">{escape(ylabel)}</text>',
    ]
    for v in _ticks(*xr):
        X = px(v)
        out.append(f'<line x1="{X:.2f}" y1="{y1}" x2="{X:.2f}" y2="{y1 + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{y1 + 18}" text-anchor="middle" font-size="11">{v:.3g}</text>')
    for v in _ticks(*yr):
        Y = py(v)
        out.append(f'<line x1="{x0 - 5}" y1="{Y:.2f}" x2="{x0}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{x0 - 8}" y="{Y + 4:.2f}" text-anchor="end" font-size="11">{v:.3g}</text>')
    return out


def _scales(xr, yr):
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = MARGIN["top"], HEIGHT - MARGIN["bottom"]
    xspan = (xr[1] - xr[0]) or 1.0
    yspan = (yr[1] - yr[0]) or 1.0

    def px(v):
        return x0 + (v - xr[0]) / xspan * (x1 - x0)

    def py(v):
        return y1 - (v - yr[0]) / yspan * (y1 - y0)

    return px, py


def _document(body):
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">'
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *body, "</svg>", ""])


def heatmap(x, y, values, title="", xlabel="", ylabel="", zlabel=""):
    """Heat map of ``values[i, j]`` at ``(x[i], y[j])`` as an SVG string.

    Cells are rectangles centred on the sample points; NaN cells are grey.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    z = np.asarray(values, float)
    if z.shape != (x.size, y.size):
        raise ValueError(f"values shape {z.shape} does not match axes ({x.size}, {y.size})")
    finite = z[np.isfinite(z)]
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    span = (hi - lo) or 1.0

    def edges(a):
        if a.size == 1:
            return np.array([a[0] - 0.5, a[0] + 0.5])
        mid = (a[1:] + a[:-1]) / 2
        return np.concatenate([[2 * a[0] - mid[0]], mid, [2 * a[-1] - mid[-1]]])

    ex, ey = edges(x), edges(y)
    xr, yr = (ex.min(), ex.max()), (ey.min(), ey.max())
    px, py = _scales(xr, yr)
    body = []
    for i in range(x.size):
        X0, X1 = sorted((px(ex[i]), px(ex[i + 1])))
        for j in range(y.size):
            Y0, Y1 = sorted((py(ey[j]), py(ey[j + 1])))
            body.append(
                f'<rect x="{X0:.2f}" y="{Y0:.2f}" width="{X1 - X0 + 0.3:.2f}" height="{Y1 - Y0 + 0.3:.2f}" '
                f'fill="{color((z[i, j] - lo) / span)}"/>'
            )
    body += _frame(title, xlabel, ylabel, xr, yr, px, py)
    # colour bar
    bx = WIDTH - MARGIN["right"] + 20
    top, bot = MARGIN["top"], HEIGHT - MARGIN["bottom"]
    n = 50
    h = (bot - top) / n
    for k in range(n):
        body.append(f'<rect x="{bx}" y="{bot - (k + 1) * h:.2f}" width="18" height="{h + 0.3:.2f}" fill="{color(k / (n - 1))}"/>')
    body.append(f'<text x="{bx + 22}" y="{bot}" font-size="11">{lo:.3g}</text>')
    body.append(f'<text x="{bx + 22}" y="{top + 10}" font-size="11">{hi:.3g}</text>')
    body.append(f'<text x="{bx}" y="{top - 8}" font-size="11">{escape(zlabel)}</text>')
    return _document(body)


def lineplot(x, series, title="", xlabel="", ylabel=""):
    """Line plot of ``series`` (mapping label -> y values over ``x``) as an SVG string.

    Non-finite points break the polyline.
    """
    x = np.asarray(x, float)
    ys = {str(k): np.asarray(v, float) for k, v in series.items()}
    allv = np.concatenate([v[np.isfinite(v)] for v in ys.values()] + [np.array([])])
    lo, hi = (float(allv.min()), float(allv.max())) if allv.size else (0.0, 1.0)
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    xr, yr = (float(x.min()), float(x.max())), (lo - pad, hi + pad)
    px, py = _scales(xr, yr)
    body = _frame(title, xlabel, ylabel, xr, yr, px, py)
    for n, (label, y) in enumerate(ys.items()):
        col = _LINE_COLORS[n % len(_LINE_COLORS)]
        run = []
        for xv, yv in list(zip(x, y)) + [(np.nan, np.nan)]:
            if np.isfinite(yv) and np.isfinite(xv):
                run.append(f"{px(xv):.2f},{py(yv):.2f}")
            elif run:
                body.append(f'<polyline points="{" ".join(run)}" fill="none" stroke="{col}" stroke-width="1.5"/>')
                run = []
        ly = MARGIN["top"] + 16 * n + 8
        lx = WIDTH - MARGIN["right"] + 10
        body.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 18}" y2="{ly}" stroke="{col}" stroke-width="2"/>')
        body.append(f'<text x="{lx + 22}" y="{ly + 4}" font-size="11">{escape(label)}</text>')
    return _document(body)
