"""Deterministic SVG output for laminations, trees and paths.

Coordinates are printed with three decimals and nothing time-dependent is
written, so equal inputs give byte-identical files.
"""

from dataclasses import dataclass
import math

import numpy as np

from ._validation import ValidationError, check_int, check_real
from .lamination import Lamination
from .plane_tree import LatticePath, PlaneTree


@dataclass(frozen=True)
class RenderSpec:
    width: int = 512
    stroke: float = 1.0
    delta: float = 0.0
    labels: bool = False
    frames: int = 1
    out_dir: str = "."

    def __post_init__(self):
        check_int(self.width, "width", minimum=64)
        check_real(self.stroke, "stroke", minimum=0.0, strict_min=True)
        check_real(self.delta, "delta", minimum=0.0)
        check_int(self.frames, "frames", minimum=1)


def _f(x):
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def _header(w, h):
    return [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}">',
            f'<rect width="{w}" height="{h}" fill="white"/>']


def _circle_point(turn, cx, cy, r):
    # the point exp(-2 i pi turn), with the SVG y axis pointing down
    ang = 2.0 * math.pi * turn
    return cx + r * math.cos(ang), cy + r * math.sin(ang)


def render_lamination(lam, spec=RenderSpec()):
    w = spec.width
    cx = cy = w / 2.0
    r = w / 2.0 - 8.0
    out = _header(w, w)
    out.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}" fill="none" stroke="black" '
               f'stroke-width="{_f(spec.stroke)}"/>')
    a, b = lam.turns()
    ext = lam.extents()
    labels = lam.labels
    for i in range(len(lam)):
        if spec.delta > 0 and ext[i] <= spec.delta:
            continue
        x1, y1 = _circle_point(a[i], cx, cy, r)
        x2, y2 = _circle_point(b[i], cx, cy, r)
        out.append(f'<path d="M {_f(x1)} {_f(y1)} L {_f(x2)} {_f(y2)}" stroke="#b22222" '
                   f'stroke-width="{_f(spec.stroke)}" fill="none"/>')
        if spec.labels and labels is not None:
            mx, my = (x1 + x2) / 2.0, (y1 + y2) / 2.0
            out.append(f'<text x="{_f(mx)}" y="{_f(my)}" font-size="12" '
                       f'text-anchor="middle">{int(labels[i])}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _tree_layout(tree):
    """x by leaf order (parents centred over their children), y by height."""
    n = tree.n
    h = tree.heights()
    x = np.zeros(n)
    leaf = 0
    # leaves are numbered in preorder
    order = [v for v in range(n) if len(tree.children(v)) == 0]
    for v in order:
        x[v] = leaf
        leaf += 1
    for v in range(n - 1, -1, -1):
        kids = tree.children(v)
        if len(kids):
            x[v] = (x[kids[0]] + x[kids[-1]]) / 2.0
    return x, h


def render_tree(tree, spec=RenderSpec()):
    w = spec.width
    x, h = _tree_layout(tree)
    pad = 12.0
    span_x = max(x.max(), 1.0)
    span_y = max(h.max(), 1)
    height = int(max(64, min(w, 40 * (span_y + 1))))
    X = pad + x / span_x * (w - 2 * pad)
    Y = height - pad - h / span_y * (height - 2 * pad)
    out = _header(w, height)
    par = tree.parents
    for v in range(1, tree.n):
        p = par[v]
        out.append(f'<line x1="{_f(X[p])}" y1="{_f(Y[p])}" x2="{_f(X[v])}" y2="{_f(Y[v])}" '
                   f'stroke="black" stroke-width="{_f(spec.stroke)}"/>')
    rad = max(1.0, min(5.0, (w - 2 * pad) / (4.0 * (span_x + 1))))
    for v in range(tree.n):
        out.append(f'<circle cx="{_f(X[v])}" cy="{_f(Y[v])}" r="{_f(rad)}" fill="black"/>')
        if spec.labels:
            out.append(f'<text x="{_f(X[v] + rad + 2)}" y="{_f(Y[v] - rad)}" font-size="10">{v}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_path(path, spec=RenderSpec()):
    w = spec.width
    height = max(64, w // 2)
    vals = np.asarray(path.values, dtype=float)
    pad = 8.0
    if path.interpolation == "step":
        xs = np.repeat(np.arange(vals.size + 1), 2)[1:-1]
        ys = np.repeat(vals, 2)
    else:
        xs = np.arange(vals.size)
        ys = vals
    sx = (w - 2 * pad) / max(xs.max(), 1)
    lo, hi = float(ys.min()), float(ys.max())
    sy = (height - 2 * pad) / max(hi - lo, 1e-12)
    pts = " ".join(f"{_f(pad + x * sx)},{_f(height - pad - (y - lo) * sy)}" for x, y in zip(xs, ys))
    out = _header(w, height)
    out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="{_f(spec.stroke)}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(obj, spec=RenderSpec()):
    """SVG text for a :class:`Lamination`, :class:`PlaneTree` or :class:`LatticePath`."""
    if isinstance(obj, Lamination):
        return render_lamination(obj, spec)
    if isinstance(obj, PlaneTree):
        return render_tree(obj, spec)
    if isinstance(obj, LatticePath):
        return render_path(obj, spec)
    raise ValidationError(f"cannot render {type(obj).__name__}")
