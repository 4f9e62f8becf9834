"""Approximately halving hyperplanes for unit balls in any dimension.

Tries a fixed set of well-spread directions (modular-power points lifted
to the upper hemisphere) and stops at the first one whose middle window of
``b`` projected centers is at least ``t`` wide. A cut point inside that
window with few projections nearby gives the hyperplane.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import (Condition1Violated, Condition2Violated, DimensionError, DomainError,
                     FallbackWarning, PrimalityError, WidthError)
from .geometry import BallSet, Hyperplane, as_point
from .selection import kth_index


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    if k % 2 == 0:
        return k == 2
    f = 3
    while f * f <= k:
        if k % f == 0:
            return False
        f += 2
    return True


def smallest_prime_at_least(k: int) -> int:
    k = max(int(k), 2)
    while not is_prime(k):
        k += 1
    return k


def heilbronn_points(k: int, m: int) -> np.ndarray:
    """``k`` points ``(i, i^2 mod k, ..., i^m mod k) / k`` in the unit cube, as a ``(k, m)`` array."""
    if not is_prime(k):
        raise PrimalityError(f"{k} is not prime")
    if m < 1:
        raise DimensionError("cube dimension must be positive")
    pts = np.empty((k, m))
    for i in range(k):
        power = i % k
        for j in range(m):
            pts[i, j] = power
            power = (power * i) % k
    return pts / k


def lift_to_sphere(p) -> np.ndarray:
    p = as_point(p)
    if np.any(p < 0.0) or np.any(p > 1.0):
        raise DomainError(f"point {p.tolist()} lies outside the unit cube")
    v = np.append(p - 0.5, 0.5)
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class DirectionSet:
    directions: np.ndarray  # (k', d), unit rows
    source_prime: int

    def __len__(self):
        return self.directions.shape[0]


def build_directions(k: int, d: int) -> DirectionSet:
    if d < 2:
        raise DimensionError("direction sets need d >= 2")
    kp = smallest_prime_at_least(k)
    pts = heilbronn_points(kp, d - 1)
    dirs = np.array([lift_to_sphere(p) for p in pts])
    return DirectionSet(dirs, kp)


def determinant_lower_bound(d: int, k: int) -> float:
    """Guaranteed minimum of ``|det|`` over any ``d`` lifted directions built from prime ``k``."""
    return 2.0 ** (d - 1) / (math.factorial(d - 1) * d ** (d / 2) * k ** (d - 1))


def min_abs_determinant(directions: np.ndarray) -> float:
    """Exhaustive minimum of ``|det|`` over all d-subsets of the rows (inf if there are none)."""
    dirs = np.asarray(directions, dtype=float)
    k, d = dirs.shape
    best = math.inf
    if k < d:
        return best
    combos = np.array(list(itertools.combinations(range(k), d)), dtype=np.int64)
    for chunk in np.array_split(combos, max(1, len(combos) // 50000)):
        dets = np.abs(np.linalg.det(dirs[chunk]))
        best = min(best, float(dets.min()))
    return best


def strip_pair_capacity(v1, v2, w1: float, w2: float) -> float:
    """Upper bound on disjoint unit disks lying within distance ``w1`` of one line and ``w2`` of another.

    The intersection of the two strips is a parallelogram of area
    ``4 w1 w2 / |det(v1, v2)|`` and each disk occupies area ``pi``.
    """
    v1, v2 = as_point(v1), as_point(v2)
    if v1.size != 2 or v2.size != 2:
        raise DimensionError("strip capacity is planar")
    det = abs(v1[0] * v2[1] - v1[1] * v2[0])
    if det == 0.0:
        return math.inf
    return 4.0 * w1 * w2 / (det * math.pi)


@dataclass(frozen=True)
class SeparatorParams:
    d: int
    n: int
    b: int
    k: int
    t: float
    v_d: float
    conditions_met: bool = True

    @property
    def guaranteed_min_side(self) -> int:
        return math.ceil((self.n - self.b) / 2)

    @property
    def guaranteed_max_cut(self) -> Optional[float]:
        if not self.conditions_met:
            return None
        return 2.0 * self.b / (self.t - 2.0)


def spread_threshold(d: int, n: int, k: int) -> float:
    v_d = unit_ball_volume(d)
    return (v_d / (2.0 * d ** ((d - 2) / 2))) ** (1.0 / d) * n ** (1.0 / d) / k ** (2.0 - 1.0 / d)


def check_conditions(d: int, n: int, b: int, k: int, strict: bool = True) -> SeparatorParams:
    """Compute the spread threshold and check ``d n <= k b`` and ``t > 2``.

    With ``strict=False`` the params are returned with ``conditions_met``
    cleared instead of raising; such params carry no cut guarantee.
    """
    if d < 2:
        raise DimensionError("d must be at least 2")
    if not 1 <= b <= n:
        raise DomainError(f"b={b} outside 1..{n}")
    if k < 1:
        raise DomainError("k must be positive")
    v_d = unit_ball_volume(d)
    t = spread_threshold(d, n, k)
    ok = True
    if d * n > k * b:
        if strict:
            raise Condition1Violated(f"d*n <= k*b fails: {d * n} > {k * b}", d * n, k * b)
        ok = False
    if not t > 2.0:
        if strict:
            raise Condition2Violated(f"t > 2 fails: t = {t!r}", t, 2.0)
        ok = False
    return SeparatorParams(d, n, b, k, t, v_d, ok)


def params_from_alpha(d: int, n: int, alpha: float, strict: bool = True) -> SeparatorParams:
    """Constant direction count; each side keeps at least about ``alpha n`` centers.

    ``k = ceil(d / (1 - 2 alpha))``, raised to ``ceil(d n / b)`` when flooring
    ``b`` would otherwise break ``d n <= k b`` (odd ``n``, for instance).
    """
    if not 0.0 < alpha < 0.5:
        raise DomainError("alpha must lie in (0, 1/2)")
    b = max(1, math.floor((1.0 - 2.0 * alpha) * n))
    k = max(math.ceil(d / (1.0 - 2.0 * alpha)), -(-d * n // b))
    return check_conditions(d, n, b, k, strict=strict)


def params_from_f(d: int, n: int, f_value: float, strict: bool = True) -> SeparatorParams:
    """Slowly growing direction count ``d f``; each side keeps ``(n/2)(1 - 1/f)`` centers."""
    if f_value < 1.0:
        raise DomainError("f must be at least 1")
    b = min(n, math.ceil(n / f_value))
    k = math.ceil(d * f_value)
    return check_conditions(d, n, b, k, strict=strict)


def window_ranks(n: int, b: int):
    lo_rank = max(1, math.ceil((n - b) / 2))
    hi_rank = min(n, max(lo_rank, math.ceil((n + b) / 2)))
    return lo_rank, hi_rank


def spread(balls: BallSet, v, b: int):
    """Width of the middle window of projections onto ``v``.

    Returns ``(spread, lo_value, hi_value, member_ids)`` where the window runs
    from rank ``ceil((n-b)/2)`` to rank ``ceil((n+b)/2)`` and ``member_ids``
    are the centers projecting into it.
    """
    v = as_point(v)
    if v.size != balls.dim:
        raise DimensionError(f"direction has dimension {v.size}, balls {balls.dim}")
    n = len(balls)
    if not 1 <= b <= n:
        raise DomainError(f"b={b} outside 1..{n}")
    proj = balls.centers @ v
    lo_rank, hi_rank = window_ranks(n, b)
    lo = float(proj[kth_index(proj, lo_rank)])
    hi = float(proj[kth_index(proj, hi_rank)])
    members = np.flatnonzero((proj >= lo) & (proj <= hi))
    return hi - lo, lo, hi, members


def _cut_intervals(lo: float, hi: float):
    """Midpoints of ``ceil((w-2)/2)`` disjoint length-2 intervals evenly spread in ``(lo, hi)``."""
    w = hi - lo
    q = math.ceil((w - 2.0) / 2.0)
    gap = (w - 2.0 * q) / (q + 1)
    return lo + gap + 1.0 + np.arange(q) * (2.0 + gap)


def select_cut_point(values, lo: float, hi: float) -> float:
    """A point in ``(lo+1, hi-1)`` with at most ``2 b / (w - 2)`` values within distance one.

    Binary search over the disjoint unit-radius intervals: keep a range of
    intervals whose points-per-interval ratio stays within the bound, test
    the median interval, and recurse into a side that keeps the ratio.
    """
    lo, hi = float(lo), float(hi)
    w = hi - lo
    if not w > 2.0:
        raise WidthError(f"interval width {w!r} must exceed 2")
    pts = np.asarray(values, dtype=float).reshape(-1)
    mids = _cut_intervals(lo, hi)
    bound = 2.0 * pts.size / (w - 2.0)
    first, last = 0, mids.size - 1
    while first < last:
        c = (first + last) // 2
        p = mids[c]
        dist = pts - p
        inside = np.abs(dist) <= 1.0
        n_inside = int(np.count_nonzero(inside))
        if n_inside <= bound:
            return float(p)
        left = pts[dist < -1.0]
        right = pts[dist > 1.0]
        n_left_iv, n_right_iv = c - first, last - c
        # the side whose points-per-interval ratio is within the bound
        if n_left_iv > 0 and left.size <= n_left_iv * bound and (
                n_right_iv == 0 or left.size * n_right_iv <= right.size * n_left_iv):
            pts, last = left, c - 1
        else:
            pts, first = right, c + 1
    return float(mids[first])


@dataclass
class SeparatorResult:
    plane: Hyperplane
    direction_index: int
    spread: float
    guaranteed_min_side: int
    guaranteed_max_cut: Optional[float]
    actual_left: int
    actual_right: int
    actual_cut: int
    fallback: bool = False
    warnings: List[str] = field(default_factory=list)


def find_separator_nd(balls: BallSet, params: SeparatorParams) -> SeparatorResult:
    """Hyperplane keeping ``ceil((n-b)/2)`` centers per closed side and cutting at most ``2b/(t-2)`` balls.

    Directions are scanned in index order and the first with spread at
    least ``t`` (and above 2, which the cut search needs) is used. If none
    qualifies the widest direction is used instead, the result is flagged
    and a FallbackWarning is issued.
    """
    from . import oracle

    n, d = len(balls), balls.dim
    if params.n != n or params.d != d:
        raise DimensionError(f"params are for n={params.n}, d={params.d}; balls have n={n}, d={d}")
    dirs = build_directions(params.k, d).directions
    threshold = max(params.t, 2.0)
    chosen = None
    widest = None
    for i, v in enumerate(dirs):
        s = spread(balls, v, params.b)
        if s[0] >= params.t and s[0] > 2.0:
            chosen = (i, s)
            break
        if widest is None or s[0] > widest[1][0]:
            widest = (i, s)
    notes = []
    fallback = chosen is None
    if fallback:
        chosen = widest
        notes.append(f"no direction reached spread {threshold:.6g}; "
                     f"using widest direction {chosen[0]} with spread {chosen[1][0]:.6g}")
    if not params.conditions_met:
        notes.append("separator conditions do not hold; no cut bound is claimed")
    index, (w, lo, hi, members) = chosen
    v = dirs[index]
    proj = balls.centers[members] @ v
    inner = proj[(proj > lo) & (proj < hi)]
    if w > 2.0:
        cut = select_cut_point(inner, lo, hi)
    else:
        cut = 0.5 * (lo + hi)
    plane = Hyperplane(v, cut)
    left, right, on = oracle.count_sides(balls, plane)
    n_cut, _ = oracle.count_intersected(balls, plane)
    max_cut = None if fallback else params.guaranteed_max_cut
    result = SeparatorResult(plane, index, w, params.guaranteed_min_side, max_cut,
                             left + on, right + on, n_cut, fallback or not params.conditions_met,
                             notes)
    if result.fallback:
        warnings.warn("; ".join(notes), FallbackWarning, stacklevel=2)
    return result
