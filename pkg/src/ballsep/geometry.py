"""Geometric primitives for unit balls, hyperplanes and the planar duality.

Distances are measured in ball radii, so every ball has radius one.
The duality used throughout maps the point ``(px, py)`` to the line
``y = px * x - py`` and the non-vertical line ``y = m x + b`` to the point
``(m, -b)``.
"""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import DimensionError, DisjointnessError, DomainError, GeneralPositionError

TANGENCY_TOL = 1e-12
DISJOINT_SLACK = 1e-9
UNIT_TOL = 1e-12

ROTATION_BASE = 1e-12
ROTATION_MAX_EXPONENT = 60


def as_point(coords) -> np.ndarray:
    p = np.array(coords, dtype=float).reshape(-1)
    if p.size < 1:
        raise DimensionError("a point needs at least one coordinate")
    if not np.all(np.isfinite(p)):
        raise DomainError(f"non-finite coordinate in {p!r}")
    return p


def as_direction(coords) -> np.ndarray:
    v = as_point(coords)
    norm = math.sqrt(float(v @ v))
    if abs(norm - 1.0) > UNIT_TOL:
        raise DomainError(f"direction must have unit norm, got {norm!r}")
    return v


def normalize(coords) -> np.ndarray:
    v = as_point(coords)
    norm = math.sqrt(float(v @ v))
    if norm == 0.0:
        raise DomainError("cannot normalize the zero vector")
    return v / norm


class Hyperplane:
    """The set ``{x : normal . x = offset}`` with a unit normal."""

    __slots__ = ("normal", "offset")

    def __init__(self, normal, offset):
        normal = as_direction(normal)
        normal.setflags(write=False)
        offset = float(offset)
        if not math.isfinite(offset):
            raise DomainError("hyperplane offset must be finite")
        self.normal = normal
        self.offset = offset

    @property
    def dim(self) -> int:
        return self.normal.size

    @classmethod
    def from_normal(cls, normal, offset) -> "Hyperplane":
        """Build from an arbitrary nonzero normal, rescaling the offset to match."""
        v = as_point(normal)
        norm = math.sqrt(float(v @ v))
        if norm == 0.0:
            raise DomainError("hyperplane normal must be nonzero")
        return cls(v / norm, float(offset) / norm)

    def __eq__(self, other):
        if not isinstance(other, Hyperplane):
            return NotImplemented
        return self.offset == other.offset and np.array_equal(self.normal, other.normal)

    def __hash__(self):
        return hash((self.normal.tobytes(), self.offset))

    def __repr__(self):
        return f"Hyperplane(normal={self.normal.tolist()!r}, offset={self.offset!r})"


class BallSet:
    """Centers of pairwise disjoint unit balls, stored as an ``(n, d)`` array.

    Construction checks finiteness and that all center distances exceed
    ``2 - DISJOINT_SLACK``. Pass ``validate=False`` only for copies that are
    known to be isometric images of a validated set.
    """

    __slots__ = ("centers",)

    def __init__(self, centers, validate: bool = True):
        c = np.array(centers, dtype=float)
        if c.ndim == 1 and c.size == 0:
            c = c.reshape(0, 1)
        if c.ndim != 2 or c.shape[1] < 1:
            raise DimensionError(f"centers must be an (n, d) array, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise DomainError("non-finite center coordinate")
        c.setflags(write=False)
        self.centers = c
        if validate:
            check_disjoint(c)

    @property
    def dim(self) -> int:
        return self.centers.shape[1]

    def __len__(self):
        return self.centers.shape[0]

    def __repr__(self):
        return f"BallSet(n={len(self)}, dim={self.dim})"


def check_disjoint(centers: np.ndarray, slack: float = DISJOINT_SLACK) -> None:
    """Raise DisjointnessError naming the closest offending pair, if any."""
    if len(centers) < 2:
        return
    tree = cKDTree(centers)
    pairs = tree.query_pairs(2.0 - slack, output_type="ndarray")
    if len(pairs) == 0:
        return
    diff = centers[pairs[:, 0]] - centers[pairs[:, 1]]
    dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    bad = dist < 2.0 - slack
    if not np.any(bad):
        return
    pairs, dist = pairs[bad], dist[bad]
    worst = int(np.argmin(dist))
    a, b = sorted(int(i) for i in pairs[worst])
    raise DisjointnessError(a, b, float(dist[worst]))


class DualLine(NamedTuple):
    slope: float
    intercept: float
    id: int

    def at(self, x):
        return self.slope * x + self.intercept


class VerticalSegment(NamedTuple):
    x: float
    y_lo: float
    y_hi: float


class LineSet:
    """Struct-of-arrays view of a list of dual lines."""

    __slots__ = ("slopes", "intercepts", "ids")

    def __init__(self, slopes, intercepts, ids=None):
        self.slopes = np.asarray(slopes, dtype=float)
        self.intercepts = np.asarray(intercepts, dtype=float)
        if ids is None:
            ids = np.arange(self.slopes.size)
        self.ids = np.asarray(ids, dtype=np.int64)
        if not (self.slopes.shape == self.intercepts.shape == self.ids.shape):
            raise DimensionError("slopes, intercepts and ids must have equal length")

    @classmethod
    def from_lines(cls, lines: Sequence[DualLine]) -> "LineSet":
        return cls([g.slope for g in lines], [g.intercept for g in lines],
                   [g.id for g in lines])

    def __len__(self):
        return self.slopes.size

    def __getitem__(self, index):
        if isinstance(index, (int, np.integer)):
            return DualLine(float(self.slopes[index]), float(self.intercepts[index]),
                            int(self.ids[index]))
        return LineSet(self.slopes[index], self.intercepts[index], self.ids[index])

    def values_at(self, x: float) -> np.ndarray:
        return self.slopes * x + self.intercepts

    def to_list(self):
        return [self[i] for i in range(len(self))]


def as_lineset(lines) -> LineSet:
    if isinstance(lines, LineSet):
        return lines
    return LineSet.from_lines(list(lines))


def dualize_point(p, id: int = 0) -> DualLine:
    """Dual line ``y = px * x - py`` of a planar point."""
    p = as_point(p)
    if p.size != 2:
        raise DimensionError(f"duality is planar, got a {p.size}-dimensional point")
    return DualLine(float(p[0]), float(-p[1]), int(id))


def dualize_points(centers: np.ndarray, ids=None) -> LineSet:
    centers = np.asarray(centers, dtype=float)
    if centers.ndim != 2 or centers.shape[1] != 2:
        raise DimensionError("duality is planar")
    return LineSet(centers[:, 0].copy(), -centers[:, 1], ids)


def dualize_line(slope: float, y_intercept: float) -> np.ndarray:
    """Dual point ``(m, -b)`` of the line ``y = m x + b``."""
    slope, y_intercept = float(slope), float(y_intercept)
    if not (math.isfinite(slope) and math.isfinite(y_intercept)):
        raise DomainError("line parameters must be finite")
    return np.array([slope, -y_intercept])


def signed_distance(h: Hyperplane, p) -> float:
    p = as_point(p)
    if p.size != h.dim:
        raise DimensionError(f"point has dimension {p.size}, hyperplane {h.dim}")
    return float(h.normal @ p) - h.offset


def signed_distances(h: Hyperplane, centers: np.ndarray) -> np.ndarray:
    centers = np.asarray(centers, dtype=float)
    if centers.ndim != 2 or centers.shape[1] != h.dim:
        raise DimensionError(f"centers shape {centers.shape} vs hyperplane dimension {h.dim}")
    return centers @ h.normal - h.offset


def ball_intersects_hyperplane(h: Hyperplane, center) -> bool:
    # tangency does not count
    return abs(signed_distance(h, center)) < 1.0 - TANGENCY_TOL


def dual_segment_for_line(slope: float, intercept: float) -> VerticalSegment:
    """Vertical dual segment crossed by exactly the dual lines of disks hit by ``y = m x + b``."""
    m, b = float(slope), float(intercept)
    if not (math.isfinite(m) and math.isfinite(b)):
        raise DomainError("line parameters must be finite")
    r = math.sqrt(m * m + 1.0)
    return VerticalSegment(m, -b - r, -b + r)


def segment_crossed(line: DualLine, seg: VerticalSegment) -> bool:
    # strict, mirroring the tangency rule of the primal predicate
    y = line.slope * seg.x + line.intercept
    half = 0.5 * (seg.y_hi - seg.y_lo)
    mid = 0.5 * (seg.y_hi + seg.y_lo)
    return abs(y - mid) < half * (1.0 - TANGENCY_TOL)


def lines_hit_disks(slopes, intercepts, centers) -> np.ndarray:
    """Batch primal test: does line ``i`` (``y = m_i x + b_i``) meet the unit disk at ``centers[i]``?"""
    m = np.asarray(slopes, dtype=float)
    b = np.asarray(intercepts, dtype=float)
    c = np.asarray(centers, dtype=float)
    dist = (c[:, 1] - m * c[:, 0] - b) / np.sqrt(m * m + 1.0)
    return np.abs(dist) < 1.0 - TANGENCY_TOL


def dual_segments_crossed(slopes, intercepts, centers) -> np.ndarray:
    """Batch dual test: does the dual line of ``centers[i]`` cross the dual segment of line ``i``?"""
    m = np.asarray(slopes, dtype=float)
    b = np.asarray(intercepts, dtype=float)
    c = np.asarray(centers, dtype=float)
    half = np.sqrt(m * m + 1.0)
    y = c[:, 0] * m - c[:, 1]
    return np.abs(y + b) < half * (1.0 - TANGENCY_TOL)


def hyperplane_from_line(slope: float, intercept: float) -> Hyperplane:
    """Hyperplane form of ``y = m x + b``; the normal points upward."""
    s = math.sqrt(slope * slope + 1.0)
    return Hyperplane(np.array([-slope / s, 1.0 / s]), intercept / s)


def line_from_hyperplane(h: Hyperplane):
    """``(slope, intercept)`` of a non-vertical planar hyperplane."""
    if h.dim != 2:
        raise DimensionError("only planar hyperplanes are lines")
    nx, ny = h.normal
    if ny == 0.0:
        raise DomainError("vertical line has no slope-intercept form")
    return float(-nx / ny), float(h.offset / ny)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotate_to_general_position(balls: BallSet):
    """Rotate about the origin until all center x-coordinates are distinct.

    Tries the angles ``2**j * 1e-12`` for ``j = 0..60`` in order and returns
    ``(rotated_balls, angle)``; the angle is 0 when no rotation is needed.
    """
    if balls.dim != 2:
        raise DimensionError("general-position rotation is planar")
    c = balls.centers
    if _distinct(c[:, 0]):
        return balls, 0.0
    for j in range(ROTATION_MAX_EXPONENT + 1):
        theta = ROTATION_BASE * 2.0 ** j
        rotated = c @ rotation_matrix(theta).T
        if _distinct(rotated[:, 0]):
            return BallSet(rotated, validate=False), theta
    raise GeneralPositionError("no rotation in the schedule separates the x-coordinates")


def _distinct(xs: np.ndarray) -> bool:
    return np.unique(xs).size == xs.size
