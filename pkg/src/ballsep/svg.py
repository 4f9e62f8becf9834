"""Static SVG 1.1 pictures: disks with a separating line, and per-round dual views."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .geometry import BallSet, Hyperplane, LineSet

WIDTH = 800
HEIGHT = 600
MARGIN = 0.05

_STYLE = """<style>
.disk { fill: none; stroke: #335; stroke-width: 1; }
.disk.intersected { fill: #e8a33d; fill-opacity: 0.6; stroke: #a3520f; }
.separator { stroke: #c0152f; stroke-width: 2; }
.label { font-family: sans-serif; font-size: 14px; fill: #222; }
.slab { fill: #f2f2f2; stroke: none; }
.boundary { stroke: #999; stroke-width: 1; stroke-dasharray: 4 3; }
.dual { stroke: #5577aa; stroke-width: 0.6; stroke-opacity: 0.5; fill: none; }
.trapezoid { fill: #6c9; fill-opacity: 0.35; stroke: #286; stroke-width: 1.5; }
.tube { fill: none; stroke: #d62; stroke-width: 1.5; }
</style>"""


def _num(x: float) -> str:
    return format(float(x), ".6g")


class _Frame:
    """Affine map from a data box onto the pixel canvas (y up in data, down in pixels)."""

    def __init__(self, x0, x1, y0, y1, equal_aspect=False):
        dx, dy = x1 - x0, y1 - y0
        dx = dx if dx > 0 else 1.0
        dy = dy if dy > 0 else 1.0
        x0, x1 = x0 - MARGIN * dx, x1 + MARGIN * dx
        y0, y1 = y0 - MARGIN * dy, y1 + MARGIN * dy
        sx = WIDTH / (x1 - x0)
        sy = HEIGHT / (y1 - y0)
        if equal_aspect:
            sx = sy = min(sx, sy)
        self.x0, self.x1, self.y0, self.y1 = x0, x1, y0, y1
        self.sx, self.sy = sx, sy
        self.width = (x1 - x0) * sx
        self.height = (y1 - y0) * sy

    def px(self, x):
        return (x - self.x0) * self.sx

    def py(self, y):
        return (self.y1 - y) * self.sy


def _document(frame: _Frame, body):
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_num(frame.width)}" height="{_num(frame.height)}" '
            f'viewBox="0 0 {_num(frame.width)} {_num(frame.height)}">')
    return "\n".join([head, _STYLE, *body, "</svg>"]) + "\n"


def _clip_line(plane: Hyperplane, frame: _Frame):
    """End points of the line ``normal . x = offset`` inside the frame's data box."""
    nx, ny = (float(v) for v in plane.normal)
    c = plane.offset
    pts = []
    if abs(ny) > 1e-15:
        for x in (frame.x0, frame.x1):
            y = (c - nx * x) / ny
            if frame.y0 - 1e-9 <= y <= frame.y1 + 1e-9:
                pts.append((x, y))
    if abs(nx) > 1e-15:
        for y in (frame.y0, frame.y1):
            x = (c - ny * y) / nx
            if frame.x0 - 1e-9 <= x <= frame.x1 + 1e-9:
                pts.append((x, y))
    if len(pts) < 2:
        return None
    pts.sort()
    return pts[0], pts[-1]


def primal_svg(balls: BallSet, plane: Hyperplane = None, intersected=(), counts=None) -> str:
    """Disks (intersected ones filled), the separating line and the side counts."""
    if balls.dim != 2:
        raise ValueError("only planar instances can be drawn")
    c = balls.centers
    if len(balls):
        frame = _Frame(c[:, 0].min() - 1, c[:, 0].max() + 1, c[:, 1].min() - 1,
                       c[:, 1].max() + 1, equal_aspect=True)
    else:
        frame = _Frame(-1, 1, -1, 1, equal_aspect=True)
    hit = set(int(i) for i in intersected)
    body = []
    for i, (x, y) in enumerate(c.tolist()):
        cls = "disk intersected" if i in hit else "disk"
        body.append(f'<circle class="{cls}" cx="{_num(frame.px(x))}" cy="{_num(frame.py(y))}" '
                    f'r="{_num(frame.sx)}"/>')
    if plane is not None:
        ends = _clip_line(plane, frame)
        if ends is not None:
            (xa, ya), (xb, yb) = ends
            body.append(f'<line class="separator" x1="{_num(frame.px(xa))}" y1="{_num(frame.py(ya))}" '
                        f'x2="{_num(frame.px(xb))}" y2="{_num(frame.py(yb))}"/>')
    if counts is not None:
        left, right, cut = counts
        text = f"closed sides {left} / {right}, intersected {cut}"
        body.append(f'<text class="label" x="8" y="18">{escape(text)}</text>')
    return _document(frame, body)


def dual_svg(lines: LineSet, record: dict, max_lines: int = 400) -> str:
    """One prune-and-search round: slab, subslab walls, trapezoid, its tube and the round's lines.

    ``lines`` should be the lines alive when the round started; at most
    ``max_lines`` of them (evenly subsampled) are drawn.
    """
    left, right = record["slab"]
    trap = record["trapezoid"]
    xl, xr = trap["x_left"], trap["x_right"]
    xs = np.linspace(xl, xr, 65)
    root = np.sqrt(1.0 + xs * xs)
    up = trap["upper"][0] * xs + trap["upper"][1] + root
    lo = trap["lower"][0] * xs + trap["lower"][1] - root
    span = float(up.max() - lo.min())
    frame = _Frame(left, right, float(lo.min()) - 0.5 * span, float(up.max()) + 0.5 * span)

    body = [f'<rect class="slab" x="{_num(frame.px(left))}" y="0" '
            f'width="{_num(frame.px(right) - frame.px(left))}" height="{_num(frame.height)}"/>']
    for x in record["boundaries"]:
        body.append(f'<line class="boundary" x1="{_num(frame.px(x))}" y1="0" '
                    f'x2="{_num(frame.px(x))}" y2="{_num(frame.height)}"/>')
    step = max(1, math.ceil(len(lines) / max_lines))
    for i in range(0, len(lines), step):
        m, b = lines.slopes[i], lines.intercepts[i]
        body.append(f'<line class="dual" x1="{_num(frame.px(left))}" y1="{_num(frame.py(m * left + b))}" '
                    f'x2="{_num(frame.px(right))}" y2="{_num(frame.py(m * right + b))}"/>')
    corners = [(xl, trap["y_upper_left"]), (xr, trap["y_upper_right"]),
               (xr, trap["y_lower_right"]), (xl, trap["y_lower_left"])]
    pts = " ".join(f"{_num(frame.px(x))},{_num(frame.py(y))}" for x, y in corners)
    body.append(f'<polygon class="trapezoid" points="{pts}"/>')
    for curve in (up, lo):
        pts = " ".join(f"{_num(frame.px(x))},{_num(frame.py(y))}" for x, y in zip(xs, curve))
        body.append(f'<polyline class="tube" points="{pts}"/>')
    text = (f"round {record['iteration']}: {record['lines_before']} lines, m = {record['m']}, "
            f"kept {record['survivors']}, level {record['lambda']}")
    body.append(f'<text class="label" x="8" y="18">{escape(text)}</text>')
    return _document(frame, body)
