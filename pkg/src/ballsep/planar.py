"""Exact halving lines for unit disks by prune-and-search in the dual arrangement.

Each disk center ``p`` becomes the dual line ``y = px x - py``; a halving
line is a point on the median level of these lines, and the line meets the
disk of ``p`` exactly when its dual point is within vertical distance
``sqrt(1 + x^2)`` of ``p*``. Starting from the slab ``0 <= x <= 1`` every
round

1. cuts the slab into at most ``m_max`` pieces holding few arrangement
   vertices each,
2. encloses the tracked level of every piece in a trapezoid spanned by the
   levels ``lam -+ n/8`` at the piece walls,
3. widens the trapezoid by ``sqrt(1 + x^2)`` vertically (its tube) and counts
   the lines meeting the tube over the central part (core) of the piece,
4. keeps the core of a wide piece with fewest such lines and drops every
   line that misses its tube, shifting ``lam`` by the drops below.

The median point of the final slab dualises to the answer.
"""
from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional

import numpy as np

from . import oracle
from .errors import DegenerateError, DimensionError, DomainError, NoProgressError, RankError
from .geometry import (BallSet, Hyperplane, LineSet, as_lineset, dualize_points,
                       line_from_hyperplane, rotate_to_general_position, rotation_matrix)
from .selection import count_inversions, count_sequence_inversions, kth_index

log = logging.getLogger(__name__)

TUBE_TOL = 1e-9
MAX_ITERATIONS = 500


@dataclass(frozen=True)
class PlanarParams:
    gamma: float = 0.25
    epsilon: float = 0.25
    m_max: int = 64
    min_lines: int = 24
    width_floor: float = 1e-13
    optimize_finish: bool = False

    def __post_init__(self):
        if not 0.0 < self.gamma < 0.5:
            raise DomainError("gamma must lie in (0, 1/2)")
        if not 0.0 < self.epsilon < 0.5:
            raise DomainError("epsilon must lie in (0, 1/2)")
        if self.m_max < 1:
            raise DomainError("m_max must be positive")
        if self.min_lines < 1:
            raise DomainError("min_lines must be positive")
        if not self.width_floor > 0.0:
            raise DomainError("width_floor must be positive")

    @property
    def c(self) -> float:
        """Constant of the theoretical width threshold ``c log(n) / n``."""
        return (8.0 * self.m_max / (self.gamma * self.epsilon)) ** 2


class Slab(NamedTuple):
    left: float
    right: float

    @property
    def width(self) -> float:
        return self.right - self.left

    def core(self, gamma: float) -> "Slab":
        w = self.width
        return Slab(self.left + gamma * w, self.right - gamma * w)


@dataclass
class SlabState:
    lines: LineSet
    slab: Slab
    lam: int
    discarded_below: int = 0
    iteration: int = 0


@dataclass(frozen=True)
class Trapezoid:
    x_left: float
    x_right: float
    y_upper_left: float
    y_upper_right: float
    y_lower_left: float
    y_lower_right: float
    upper: tuple  # (slope, intercept) through the upper corners
    lower: tuple  # (slope, intercept) through the lower corners

    def upper_at(self, x):
        return self.upper[0] * x + self.upper[1]

    def lower_at(self, x):
        return self.lower[0] * x + self.lower[1]

    def tube_upper(self, x):
        return self.upper_at(x) + np.sqrt(1.0 + np.square(x))

    def tube_lower(self, x):
        return self.lower_at(x) - np.sqrt(1.0 + np.square(x))


@dataclass
class HalvingResult:
    line: tuple  # (slope, intercept) in the input frame
    plane: Hyperplane
    intersected_ids: List[int]
    left_count: int
    right_count: int
    iterations: int
    survivors_at_finish: int
    survivor_cut_count: int
    dual_point: tuple
    rotation_angle: float
    set_aside: Optional[int]
    final_slab: Slab
    stop_reason: str = ""
    warnings: List[str] = field(default_factory=list)


# -- level and vertex counting ------------------------------------------------

def level_value_at(lines, x: float, lam: int) -> float:
    """Value at ``x`` of the ``lam``-th lowest line (ties by id)."""
    ls = as_lineset(lines)
    if not 1 <= lam <= len(ls):
        raise RankError(f"level {lam} outside 1..{len(ls)}")
    values = ls.values_at(x)
    return float(values[kth_index(values, lam, ls.ids)])


def order_at(lines, x: float) -> np.ndarray:
    """Line ids sorted by ``(value at x, id)``."""
    ls = as_lineset(lines)
    return ls.ids[np.lexsort((ls.ids, ls.values_at(x)))]


def vertices_in(lines, a: float, b: float) -> int:
    """Arrangement vertices with ``a < x < b``: pairs whose order differs at the two ends."""
    if not a < b:
        raise DomainError("need a < b")
    return count_inversions(order_at(lines, a), order_at(lines, b))


class _VertexCounter:
    """Counts vertices in ``(a, x)`` for many ``x`` against one precomputed order at ``a``."""

    def __init__(self, lines: LineSet, a: float):
        order = np.lexsort((lines.ids, lines.values_at(a)))
        self.slopes = lines.slopes[order]
        self.intercepts = lines.intercepts[order]
        self.ids = lines.ids[order]
        self.calls = 0

    def __call__(self, x: float) -> int:
        self.calls += 1
        return count_sequence_inversions(self.slopes * x + self.intercepts, self.ids)


def subdivide_slab(lines, slab, m_max: int = 64, width_floor: float = 1e-13,
                   with_steps: bool = False):
    """Boundaries ``[l = x_0 < x_1 < ... < x_m = r]`` with ``m <= m_max``.

    Each piece holds at most ``ceil(V / m_max)`` of the ``V`` vertices in the
    slab whenever bisection can isolate the targets. Boundary ``i`` is found
    by bisecting for a point with exactly ``floor(i V / m_max)`` vertices to
    its left; bisection stops early once the bracket is narrower than
    ``width_floor`` times the slab width. With ``with_steps`` the per-boundary
    step counts are returned as well.
    """
    ls = as_lineset(lines)
    if len(ls) < 2:
        raise DegenerateError("subdividing needs at least two lines")
    left, right = float(slab[0]), float(slab[1])
    if not left < right:
        raise DomainError("slab must have positive width")
    counter = _VertexCounter(ls, left)
    total = counter(right)
    # every evaluated (x, count), kept sorted; later targets start from the
    # tightest bracket seen so far
    seen_x, seen_f = [left, right], [0, total]
    bounds = [left]
    steps = []
    prev_f = 0
    floor_w = width_floor * (right - left)
    for i in range(1, m_max):
        target = (i * total) // m_max
        if target <= prev_f:
            continue
        j = bisect.bisect_left(seen_f, target)
        n_steps = 0
        if seen_f[j] == target:
            x, fx = seen_x[j], target
        else:
            lo, f_lo, hi, f_hi = seen_x[j - 1], seen_f[j - 1], seen_x[j], seen_f[j]
            x = None
            while hi - lo >= floor_w:
                mid = 0.5 * (lo + hi)
                if not lo < mid < hi:
                    break
                n_steps += 1
                f = counter(mid)
                k = bisect.bisect_left(seen_x, mid)
                seen_x.insert(k, mid)
                seen_f.insert(k, f)
                if f == target:
                    x, fx = mid, f
                    break
                if f < target:
                    lo, f_lo = mid, f
                else:
                    hi, f_hi = mid, f
            if x is None:
                x, fx = (lo, f_lo) if target - f_lo <= f_hi - target else (hi, f_hi)
        steps.append(n_steps)
        if bounds[-1] < x < right:
            bounds.append(x)
            prev_f = fx
    bounds.append(right)
    if with_steps:
        return bounds, steps
    return bounds


# -- trapezoids and tubes --------------------------------------------------

def _levels(n: int, lam: int):
    half = n // 8
    return min(n, lam + half), max(1, lam - half)


def build_trapezoid(lines, subslab, lam: int) -> Trapezoid:
    """Trapezoid between levels ``lam + floor(n/8)`` and ``lam - floor(n/8)`` at the walls."""
    ls = as_lineset(lines)
    n = len(ls)
    if not 1 <= lam <= n:
        raise RankError(f"level {lam} outside 1..{n}")
    up, down = _levels(n, lam)
    xl, xr = float(subslab[0]), float(subslab[1])
    if not xl < xr:
        raise DomainError("subslab must have positive width")
    yul, yur = level_value_at(ls, xl, up), level_value_at(ls, xr, up)
    yll, ylr = level_value_at(ls, xl, down), level_value_at(ls, xr, down)
    return _trapezoid(xl, xr, yul, yur, yll, ylr)


def _trapezoid(xl, xr, yul, yur, yll, ylr) -> Trapezoid:
    w = xr - xl
    su = (yur - yul) / w
    sl = (ylr - yll) / w
    return Trapezoid(xl, xr, yul, yur, yll, ylr, (su, yul - su * xl), (sl, yll - sl * xl))


def _convex_roots(p, q):
    """Both roots of ``(p^2 - 1) x^2 + 2 p q x + q^2 - 1``, the zeros of ``sqrt(1+x^2) + p x + q``.

    Spurious roots of the squared equation are harmless: callers evaluate
    the unsquared function at every candidate. Missing roots are NaN.
    """
    a = p * p - 1.0
    b = 2.0 * p * q
    c = q * q - 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        disc = b * b - 4.0 * a * c
        sq = np.sqrt(np.where(disc >= 0.0, disc, np.nan))
        qq = -0.5 * (b + np.copysign(sq, b))
        linear = np.abs(a) < 1e-14
        r1 = np.where(linear, -c / b, qq / a)
        r2 = np.where(linear, np.nan, c / qq)
    return r1, r2


def _tube_gaps(slopes, intercepts, upper, lower, x):
    """Amounts by which lines clear the tube at ``x`` from below-the-top and above-the-bottom.

    Returns ``(to_top, to_bottom)``; a line is inside the tube at ``x`` iff both
    are non-negative. Both are convex in ``x``.
    """
    root = np.sqrt(1.0 + x * x)
    to_top = root + (upper[0] - slopes) * x + (upper[1] - intercepts)
    to_bottom = root + (slopes - lower[0]) * x + (intercepts - lower[1])
    return to_top, to_bottom


def tube_hits(slopes, intercepts, upper, lower, x0: float, x1: float,
              tol: float = TUBE_TOL) -> np.ndarray:
    """Vectorised tube test: does each line come within ``tol`` of the tube over ``[x0, x1]``?

    The set where a line stays under the (convex) top boundary is
    ``[x0, x1]`` minus one open interval, likewise for the bottom boundary,
    so a nonempty intersection contains one of ``x0``, ``x1`` or a boundary
    root. Those candidates are tested directly.

    Carriers and range ends may be column arrays of shape ``(m, 1)`` to test
    ``m`` tubes at once; the result then has shape ``(m, n)``.
    """
    slopes = np.asarray(slopes, dtype=float)
    intercepts = np.asarray(intercepts, dtype=float)
    shape = np.broadcast_shapes(slopes.shape, np.shape(upper[0]), np.shape(x0))
    cands = [np.broadcast_to(x0, shape), np.broadcast_to(x1, shape)]
    cands.extend(_convex_roots(upper[0] - slopes, upper[1] - intercepts + tol))
    cands.extend(_convex_roots(slopes - lower[0], intercepts - lower[1] + tol))
    hit = np.zeros(shape, dtype=bool)
    for x in cands:
        x = np.clip(np.where(np.isnan(x), x0, x), x0, x1)
        to_top, to_bottom = _tube_gaps(slopes, intercepts, upper, lower, x)
        slack = -tol - 1e-12 * (1.0 + np.abs(intercepts) + np.abs(slopes * x))
        hit |= (to_top >= slack) & (to_bottom >= slack)
    return hit


def line_intersects_tube_in_range(g, trap: Trapezoid, x0: float, x1: float) -> bool:
    """Whether the line ``g`` meets the tube of ``trap`` somewhere in ``[x0, x1]``."""
    slope, intercept = float(g[0]), float(g[1])
    if not trap.x_left - 1e-12 <= x0 <= x1 <= trap.x_right + 1e-12:
        raise DomainError("range must lie inside the trapezoid")
    return bool(tube_hits(np.array([slope]), np.array([intercept]), trap.upper, trap.lower,
                          x0, x1)[0])


def _max_overlap(starts, ends) -> int:
    """Largest number of the closed intervals ``[starts[i], ends[i]]`` sharing a point."""
    if starts.size == 0:
        return 0
    xs = np.concatenate([starts, ends])
    kind = np.concatenate([np.zeros(starts.size), np.ones(ends.size)])  # starts first
    order = np.lexsort((kind, xs))
    delta = np.where(kind[order] == 0, 1, -1)
    return int(np.max(np.cumsum(delta)))


def _level_inside_trapezoid(slopes, intercepts, lam: int, trap: Trapezoid, x0, x1,
                            margin: float) -> bool:
    """Exact check that the ``lam``-level of the lines stays within ``margin`` of ``trap`` on ``[x0, x1]``.

    The level is below ``upper + margin`` everywhere iff at no ``x`` more than
    ``n - lam`` lines exceed that line; each line exceeds it on a sub-interval,
    so this is a maximum-overlap question (and symmetrically for the bottom).
    """
    n = slopes.size
    if not 1 <= lam <= n:
        return False
    for (cs, cc), sign, allowed in ((trap.upper, 1.0, n - lam), (trap.lower, -1.0, lam - 1)):
        # excess(x) = sign * (g(x) - carrier(x)) - margin, linear in x
        e0 = sign * (slopes * x0 + intercepts - (cs * x0 + cc)) - margin
        e1 = sign * (slopes * x1 + intercepts - (cs * x1 + cc)) - margin
        over = (e0 > 0) | (e1 > 0)
        if np.count_nonzero(over) <= allowed:
            continue
        e0, e1 = e0[over], e1[over]
        with np.errstate(divide="ignore", invalid="ignore"):
            cross = np.where(e0 != e1, x0 + (x1 - x0) * e0 / (e0 - e1), x0)
        starts = np.where(e0 > 0, x0, np.clip(cross, x0, x1))
        ends = np.where(e1 > 0, x1, np.clip(cross, x0, x1))
        if _max_overlap(starts, ends) > allowed:
            return False
    return True


# -- one round ---------------------------------------------------------------

def iterate_once(state: SlabState, params: PlanarParams,
                 trace: Optional[Callable[[dict], None]] = None) -> SlabState:
    """One prune-and-search round; see the module docstring for the steps.

    Among pieces at least ``w / m`` wide the one with the fewest tube-crossing
    lines is kept (leftmost on ties). Before committing, the tracked level is
    verified to stay inside the chosen trapezoid over the new slab; pieces
    failing that check are skipped. Raises NoProgressError when no piece
    qualifies or nothing is dropped and the slab cannot shrink further.
    """
    lines = state.lines
    n = len(lines)
    if n <= params.min_lines:
        raise DomainError(f"{n} lines is at or below the brute-force threshold {params.min_lines}")
    slab = Slab(*state.slab)
    lam = state.lam
    bounds = subdivide_slab(lines, slab, params.m_max, params.width_floor)
    m = len(bounds) - 1
    up, down = _levels(n, lam)
    upper_y = [level_value_at(lines, x, up) for x in bounds]
    lower_y = [level_value_at(lines, x, down) for x in bounds]
    traps = [_trapezoid(bounds[i], bounds[i + 1], upper_y[i], upper_y[i + 1],
                        lower_y[i], lower_y[i + 1]) for i in range(m)]
    cores = [Slab(bounds[i], bounds[i + 1]).core(params.gamma) for i in range(m)]
    hits = []
    for start in range(0, m, 16):
        block = range(start, min(start + 16, m))
        col = lambda vals: np.array(vals, dtype=float)[:, None]  # noqa: E731
        h = tube_hits(lines.slopes, lines.intercepts,
                      (col([traps[i].upper[0] for i in block]), col([traps[i].upper[1] for i in block])),
                      (col([traps[i].lower[0] for i in block]), col([traps[i].lower[1] for i in block])),
                      col([cores[i].left for i in block]), col([cores[i].right for i in block]))
        hits.extend(h)
    counts = [int(np.count_nonzero(h)) for h in hits]

    min_width = slab.width / m
    eligible = [i for i in range(m) if bounds[i + 1] - bounds[i] >= min_width * (1.0 - 1e-12)]
    eligible.sort(key=lambda i: (counts[i], i))
    chosen = None
    skipped = []
    for i in eligible:
        keep = hits[i]
        drop = ~keep
        core = cores[i]
        mid = 0.5 * (core.left + core.right)
        below = drop & (lines.values_at(mid) < traps[i].tube_lower(mid))
        n_below = int(np.count_nonzero(below))
        new_lam = lam - n_below
        n_keep = int(np.count_nonzero(keep))
        if not np.any(drop) and core.width < params.width_floor:
            skipped.append(i)
            continue
        if not _level_inside_trapezoid(lines.slopes[keep], lines.intercepts[keep], new_lam,
                                       traps[i], core.left, core.right, 0.5 * TUBE_TOL):
            skipped.append(i)
            continue
        chosen = (i, keep, below, n_below, new_lam, n_keep)
        break
    if chosen is None:
        raise NoProgressError(f"no admissible piece among {m} (skipped {skipped})")
    i, keep, below, n_below, new_lam, n_keep = chosen
    core = cores[i]
    if trace is not None:
        trap = traps[i]
        trace({
            "iteration": state.iteration + 1,
            "slab": [slab.left, slab.right],
            "m": m,
            "boundaries": list(bounds),
            "n_i": counts,
            "chosen": i,
            "core": [core.left, core.right],
            "lines_before": n,
            "survivors": n_keep,
            "lambda_before": lam,
            "lambda": new_lam,
            "discarded_below": n_below,
            "discarded_above": n - n_keep - n_below,
            "skipped": skipped,
            "trapezoid": {
                "x_left": trap.x_left, "x_right": trap.x_right,
                "y_upper_left": trap.y_upper_left, "y_upper_right": trap.y_upper_right,
                "y_lower_left": trap.y_lower_left, "y_lower_right": trap.y_lower_right,
                "upper": list(trap.upper), "lower": list(trap.lower),
            },
            "width_guard": params.c * math.log(max(n, 2)) / n,
            "survivor_ids": lines.ids[keep].tolist(),
            "discarded_ids": lines.ids[~keep].tolist(),
        })
    return SlabState(lines[keep], core, new_lam, state.discarded_below + n_below,
                     state.iteration + 1)


# -- driver ------------------------------------------------------------------

def prepare_dual(balls: BallSet):
    """Odd-size, general-position dual lines of ``balls``.

    Returns ``(lines, angle, set_aside)``: for even ``n`` the lexicographically
    smallest center is set aside (its index is returned), the rest are
    rotated by ``angle`` and dualised with their original indices as ids.
    """
    if balls.dim != 2:
        raise DimensionError("halving lines are planar")
    n = len(balls)
    if n < 1:
        raise DomainError("need at least one disk")
    ids = np.arange(n)
    set_aside = None
    if n % 2 == 0:
        c = balls.centers
        set_aside = int(np.lexsort((c[:, 1], c[:, 0]))[0])
        ids = ids[ids != set_aside]
    work = BallSet(balls.centers[ids], validate=False)
    rotated, angle = rotate_to_general_position(work)
    return dualize_points(rotated.centers, ids), angle, set_aside


def _cut_count(lines: LineSet, x: float, y: float) -> int:
    half = math.sqrt(1.0 + x * x)
    return int(np.count_nonzero(np.abs(lines.values_at(x) - y) < half * (1.0 - 1e-12)))


def halving_line(balls: BallSet, params: PlanarParams = None,
                 trace: Optional[Callable[[dict], None]] = None) -> HalvingResult:
    """A line with at least ``ceil(n/2)`` centers in each closed halfplane that meets few disks."""
    params = params or PlanarParams()
    lines, angle, set_aside = prepare_dual(balls)
    n_odd = len(lines)
    state = SlabState(lines, Slab(0.0, 1.0), (n_odd + 1) // 2)
    notes = []
    stop = "min_lines"
    while len(state.lines) > params.min_lines:
        if state.slab.width < params.width_floor:
            stop = "width_floor"
            break
        if state.iteration >= MAX_ITERATIONS:
            stop = "max_iterations"
            notes.append(f"stopped after {MAX_ITERATIONS} rounds")
            break
        log.debug("round %d: %d lines, width %.3g, theoretical width guard %.3g",
                  state.iteration, len(state.lines), state.slab.width,
                  params.c * math.log(max(len(state.lines), 2)) / len(state.lines))
        try:
            state = iterate_once(state, params, trace)
        except NoProgressError as exc:
            stop = f"no_progress: {exc}"
            break

    slab, survivors, lam = state.slab, state.lines, state.lam
    xs = [0.5 * (slab.left + slab.right)]
    if params.optimize_finish:
        xs = np.linspace(slab.left, slab.right, 33).tolist()
    best = None
    for x in xs:
        y = level_value_at(survivors, x, lam)
        cut = _cut_count(survivors, x, y)
        if best is None or cut < best[2]:
            best = (x, y, cut)
    x_star, y_star, survivor_cut = best

    # the dual point (x*, y*) is the line y = x* X - y* in the rotated frame
    s = math.sqrt(1.0 + x_star * x_star)
    normal = np.array([-x_star / s, 1.0 / s])
    normal = rotation_matrix(angle).T @ normal
    plane = Hyperplane(normal / np.linalg.norm(normal), -y_star / s)
    if set_aside is not None:
        d = float(plane.normal @ balls.centers[set_aside]) - plane.offset
        survivor_cut += int(abs(d) < 1.0 - 1e-12)

    left, right, on = oracle.count_sides(balls, plane)
    _, ids = oracle.count_intersected(balls, plane)
    return HalvingResult(line_from_hyperplane(plane), plane, ids, left + on, right + on,
                         state.iteration, len(survivors), survivor_cut, (x_star, y_star),
                         angle, set_aside, slab, stop, notes)
