"""Brute-force verifiers.

Everything here is written with plain loops and shares no code with the
algorithms it checks; it only reads the ``BallSet`` and ``Hyperplane``
containers. Keep it that way.
"""
from __future__ import annotations

import math

from .errors import DimensionError, DomainError
from .geometry import BallSet, Hyperplane

SIDE_TOL = 1e-12
TANGENCY_TOL = 1e-12


def _signed(normal, offset, center) -> float:
    s = 0.0
    for a, x in zip(normal, center):
        s += a * x
    return s - offset


def _check_dims(balls: BallSet, plane: Hyperplane):
    if balls.dim != plane.dim:
        raise DimensionError(f"balls are {balls.dim}-dimensional, plane is {plane.dim}-dimensional")


def count_sides(balls: BallSet, plane: Hyperplane):
    """``(left, right, on)`` center counts; closed sides are ``left + on`` and ``right + on``."""
    _check_dims(balls, plane)
    normal = plane.normal.tolist()
    left = right = on = 0
    for c in balls.centers.tolist():
        s = _signed(normal, plane.offset, c)
        if s < -SIDE_TOL:
            left += 1
        elif s > SIDE_TOL:
            right += 1
        else:
            on += 1
    return left, right, on


def count_intersected(balls: BallSet, plane: Hyperplane):
    """Number and ids of balls the plane meets (tangent balls are not counted)."""
    _check_dims(balls, plane)
    normal = plane.normal.tolist()
    ids = []
    for i, c in enumerate(balls.centers.tolist()):
        if abs(_signed(normal, plane.offset, c)) < 1.0 - TANGENCY_TOL:
            ids.append(i)
    return len(ids), ids


def verify_m_separator(balls: BallSet, plane: Hyperplane, m: int) -> bool:
    left, right, on = count_sides(balls, plane)
    return left + on >= m and right + on >= m


def _line_through(center, angle):
    """Hyperplane with normal at ``angle`` passing through ``center``."""
    nx, ny = math.cos(angle), math.sin(angle)
    return Hyperplane([nx, ny], nx * center[0] + ny * center[1])


def best_halving_line_2d(balls: BallSet):
    """Exhaustive search for the halving line meeting the fewest disks (odd ``n <= 64``).

    Candidate normals are the perpendiculars of every center difference,
    each turned by +-1e-6 rad, plus 256 evenly spaced angles. For each
    normal the line goes through the center of median projection.
    Returns ``(hyperplane, min_intersections)``.
    """
    n = len(balls)
    if balls.dim != 2:
        raise DimensionError("the exhaustive halving oracle is planar")
    if n < 1 or n > 64 or n % 2 == 0:
        raise DomainError(f"need odd 1 <= n <= 64, got {n}")
    pts = [(float(x), float(y)) for x, y in balls.centers]
    angles = [math.pi * i / 256 for i in range(256)]
    for i in range(n):
        for j in range(i + 1, n):
            dx, dy = pts[j][0] - pts[i][0], pts[j][1] - pts[i][1]
            base = math.atan2(dy, dx) + math.pi / 2
            angles.append(base + 1e-6)
            angles.append(base - 1e-6)
    half = (n + 1) // 2
    best = None
    for a in angles:
        nx, ny = math.cos(a), math.sin(a)
        order = sorted(range(n), key=lambda q: (nx * pts[q][0] + ny * pts[q][1], q))
        plane = _line_through(pts[order[n // 2]], a)
        left, right, on = count_sides(balls, plane)
        if left + on < half or right + on < half:
            continue
        cut, _ = count_intersected(balls, plane)
        if best is None or cut < best[1]:
            best = (plane, cut)
    return best


def brute_vertices_in_slab(lines, a: float, b: float) -> int:
    """Pairwise crossings of ``(slope, intercept)`` lines with ``a < x < b``."""
    if hasattr(lines, "slopes"):
        lines = list(zip(lines.slopes.tolist(), lines.intercepts.tolist()))
    lines = [(float(g[0]), float(g[1])) for g in lines]
    if len(lines) > 500:
        raise DomainError("brute-force vertex count is limited to 500 lines")
    if not a < b:
        raise DomainError("need a < b")
    count = 0
    for i in range(len(lines)):
        m1, c1 = lines[i]
        for j in range(i + 1, len(lines)):
            m2, c2 = lines[j]
            if m1 == m2:
                continue
            x = (c2 - c1) / (m1 - m2)
            if a < x < b:
                count += 1
    return count
