"""Hand-rolled static SVG renderings of package artifacts.

No plotting dependency: every drawing is a pure string function of the
data with floats formatted to 6 significant digits, so identical inputs
produce byte-identical files and tests can diff them.
"""

import math

import numpy as np

__all__ = ["svg_cloud", "svg_heatmap", "svg_diagram"]

_SIZE = 480
_MARGIN = 48
_DIM_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _f(x):
    """Fixed 6-significant-digit float formatting."""
    return "%.6g" % float(x)


def _header(title):
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">\n' % (_SIZE, _SIZE, _SIZE, _SIZE)
        + '<rect x="0" y="0" width="%d" height="%d" fill="white"/>\n'
        % (_SIZE, _SIZE)
        + '<text x="%d" y="20" font-family="monospace" font-size="13">%s</text>\n'
        % (_MARGIN, title)
    )


def _frame():
    inner = _SIZE - 2 * _MARGIN
    return (
        '<rect x="%d" y="%d" width="%d" height="%d" fill="none" '
        'stroke="black" stroke-width="1"/>\n' % (_MARGIN, _MARGIN, inner, inner)
    )


def svg_cloud(points, title="point cloud"):
    """Scatter of the first two coordinates of a cloud."""
    pts = np.asarray(points, dtype=float)
    xs = pts[:, 0]
    ys = pts[:, 1] if pts.shape[1] > 1 else np.zeros_like(xs)
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    span = max(x1 - x0, y1 - y0, 1e-9)
    pad = 0.05 * span
    x0, y0 = x0 - pad, y0 - pad
    span = span + 2 * pad
    inner = _SIZE - 2 * _MARGIN
    out = [_header("%s (n=%d)" % (title, pts.shape[0])), _frame()]
    for x, y in zip(xs, ys):
        px = _MARGIN + (x - x0) / span * inner
        py = _SIZE - _MARGIN - (y - y0) / span * inner
        out.append(
            '<circle cx="%s" cy="%s" r="2" fill="#1f77b4" fill-opacity="0.7"/>\n'
            % (_f(px), _f(py))
        )
    out.append(
        '<text x="%d" y="%d" font-family="monospace" font-size="11">x range [%s, %s]</text>\n'
        % (_MARGIN, _SIZE - 14, _f(xs.min()), _f(xs.max()))
    )
    out.append("</svg>\n")
    return "".join(out)


def _heat_color(v, vmax):
    """Blue-white-red scale on [-vmax, vmax], integer RGB for stable bytes."""
    if vmax <= 0:
        t = 0.0
    else:
        t = max(-1.0, min(1.0, v / vmax))
    if t >= 0:
        r, g, b = 255, int(round(255 * (1 - t))), int(round(255 * (1 - t)))
    else:
        r, g, b = int(round(255 * (1 + t))), int(round(255 * (1 + t))), 255
    return "rgb(%d,%d,%d)" % (r, g, b)


def svg_heatmap(matrix, title="covariance"):
    """Square heatmap with the numeric value printed in each cell."""
    mat = np.asarray(matrix, dtype=float)
    n = mat.shape[0]
    inner = _SIZE - 2 * _MARGIN
    cell = inner / n
    vmax = float(np.abs(mat).max())
    out = [_header(title)]
    for i in range(n):
        for j in range(n):
            x = _MARGIN + j * cell
            y = _MARGIN + i * cell
            out.append(
                '<rect x="%s" y="%s" width="%s" height="%s" fill="%s" '
                'stroke="#888" stroke-width="0.5"/>\n'
                % (_f(x), _f(y), _f(cell), _f(cell), _heat_color(mat[i, j], vmax))
            )
            out.append(
                '<text x="%s" y="%s" font-family="monospace" font-size="11" '
                'text-anchor="middle">%s</text>\n'
                % (_f(x + cell / 2), _f(y + cell / 2 + 4), _f(mat[i, j]))
            )
    out.append(_frame())
    out.append("</svg>\n")
    return "".join(out)


def svg_diagram(diag, title="persistence diagram"):
    """Birth/death scatter with the diagonal and a top rule for infinite bars.

    Finite bars are circles, one color per homology dimension; infinite
    bars are triangles sitting on the dashed top rule at death =
    max_scale.  Each marker carries data-dim/data-birth/data-death
    attributes for machine checking.
    """
    s = float(diag.max_scale) if diag.max_scale > 0 else 1.0
    inner = _SIZE - 2 * _MARGIN

    def px(v):
        return _MARGIN + (v / s) * inner

    def py(v):
        return _SIZE - _MARGIN - (v / s) * inner

    out = [_header(title), _frame()]
    out.append(
        '<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#999" stroke-width="1"/>\n'
        % (_f(px(0)), _f(py(0)), _f(px(s)), _f(py(s)))
    )
    out.append(
        '<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#999" stroke-width="1" '
        'stroke-dasharray="4 3"/>\n'
        % (_f(px(0)), _f(py(s)), _f(px(s)), _f(py(s)))
    )
    for k in range(diag.max_dim + 1):
        color = _DIM_COLORS[k % len(_DIM_COLORS)]
        for b, d in diag.bars(k):
            if math.isinf(d):
                x, y = px(b), py(s)
                out.append(
                    '<path d="M %s %s l 5 9 l -10 0 z" fill="%s" '
                    'data-dim="%d" data-birth="%s" data-death="inf"/>\n'
                    % (_f(x), _f(y - 6), color, k, _f(b))
                )
            else:
                out.append(
                    '<circle cx="%s" cy="%s" r="3" fill="%s" fill-opacity="0.75" '
                    'data-dim="%d" data-birth="%s" data-death="%s"/>\n'
                    % (_f(px(b)), _f(py(d)), color, k, _f(b), _f(d))
                )
    legend_y = 34
    for k in range(diag.max_dim + 1):
        bars = diag.bars(k)
        out.append(
            '<text x="%d" y="%d" font-family="monospace" font-size="11" '
            'fill="%s">H%d: %d bars</text>\n'
            % (_SIZE - 150, legend_y, _DIM_COLORS[k % len(_DIM_COLORS)], k,
               bars.shape[0])
        )
        legend_y += 14
    out.append(
        '<text x="%d" y="%d" font-family="monospace" font-size="11">max scale %s</text>\n'
        % (_MARGIN, _SIZE - 14, _f(s))
    )
    out.append("</svg>\n")
    return "".join(out)
