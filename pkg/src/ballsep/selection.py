"""Deterministic order statistics and inversion counting.

``kth_index`` is the median-of-medians selection (groups of five) written
with whole-array numpy operations: every round does O(len) work and keeps
at most ~7/10 of the candidates, so the total is worst-case linear.
Inversions are counted by a compiled merge sort.
Ordering is lexicographic on ``(value, tag)`` throughout.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np
from numba import njit

from .errors import PermutationError, RankError

_SMALL = 40


class Ranked(NamedTuple):
    value: float
    tag: int


def _small_select(values, tags, k):
    order = np.lexsort((tags, values))
    return order[k]


def _pivot(values, tags):
    """Index (into ``values``) of the median of the group-of-five medians."""
    n = values.size
    full = n - n % 5
    v = values[:full].reshape(-1, 5)
    t = tags[:full].reshape(-1, 5)
    order = np.lexsort((t, v), axis=1)
    mid = order[:, 2]
    med_idx = np.arange(0, full, 5) + mid
    if full < n:
        rest = np.arange(full, n)
        r_order = np.lexsort((tags[rest], values[rest]))
        med_idx = np.append(med_idx, rest[r_order[(rest.size - 1) // 2]])
    j = _select(values[med_idx], tags[med_idx], (med_idx.size - 1) // 2)
    return med_idx[j]


def _select(values, tags, k):
    """Index of the k-th (0-based) smallest ``(value, tag)`` pair."""
    index = np.arange(values.size)
    while True:
        n = values.size
        if n <= _SMALL:
            return index[_small_select(values, tags, k)]
        p = _pivot(values, tags)
        pv, pt = values[p], tags[p]
        less = (values < pv) | ((values == pv) & (tags < pt))
        greater = (values > pv) | ((values == pv) & (tags > pt))
        n_less = int(np.count_nonzero(less))
        n_equal = n - n_less - int(np.count_nonzero(greater))
        if k < n_less:
            values, tags, index = values[less], tags[less], index[less]
        elif k < n_less + n_equal:
            return index[p]
        else:
            k -= n_less + n_equal
            values, tags, index = values[greater], tags[greater], index[greater]


def kth_index(values, k: int, tags=None) -> int:
    """Position of the k-th smallest (1-based) entry of ``values``, ties by ``tags``.

    ``tags`` defaults to the positions themselves, which makes the order total.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    if n < 1:
        raise RankError("selection from an empty sequence")
    if not 1 <= k <= n:
        raise RankError(f"rank {k} outside 1..{n}")
    tags = np.arange(n) if tags is None else np.asarray(tags, dtype=np.int64)
    return int(_select(values, tags, k - 1))


def rank_select(items: Sequence[Ranked], k: int) -> Ranked:
    """The k-th smallest of ``items`` (1-based) in ``(value, tag)`` order."""
    if len(items) < 1:
        raise RankError("selection from an empty sequence")
    if not 1 <= k <= len(items):
        raise RankError(f"rank {k} outside 1..{len(items)}")
    values = np.array([it.value for it in items], dtype=float)
    tags = np.array([it.tag for it in items], dtype=np.int64)
    i = kth_index(values, k, tags)
    return Ranked(float(items[i].value), int(items[i].tag))


@njit(cache=True)
def _less(v1, t1, v2, t2):
    return v1 < v2 or (v1 == v2 and t1 < t2)


@njit(cache=True)
def _merge_count(values, tags):
    """Merge sort of ``(values, tags)`` pairs returning the inversion count.

    Runs of 16 are insertion-sorted first; already ordered neighbours are
    copied without merging.
    """
    n = values.size
    src_v, src_t = values.copy(), tags.copy()
    total = 0
    run = 16
    for start in range(0, n, run):
        stop = min(start + run, n)
        for i in range(start + 1, stop):
            v, t = src_v[i], src_t[i]
            j = i - 1
            while j >= start and _less(v, t, src_v[j], src_t[j]):
                src_v[j + 1] = src_v[j]
                src_t[j + 1] = src_t[j]
                j -= 1
            total += i - 1 - j
            src_v[j + 1] = v
            src_t[j + 1] = t
    dst_v, dst_t = np.empty_like(values), np.empty_like(tags)
    width = run
    while width < n:
        for start in range(0, n, 2 * width):
            mid = min(start + width, n)
            stop = min(start + 2 * width, n)
            if mid >= stop or not _less(src_v[mid], src_t[mid], src_v[mid - 1], src_t[mid - 1]):
                for k in range(start, stop):
                    dst_v[k] = src_v[k]
                    dst_t[k] = src_t[k]
                continue
            i, j, k = start, mid, start
            while i < mid and j < stop:
                if _less(src_v[j], src_t[j], src_v[i], src_t[i]):
                    dst_v[k] = src_v[j]
                    dst_t[k] = src_t[j]
                    total += mid - i
                    j += 1
                else:
                    dst_v[k] = src_v[i]
                    dst_t[k] = src_t[i]
                    i += 1
                k += 1
            while i < mid:
                dst_v[k] = src_v[i]
                dst_t[k] = src_t[i]
                i += 1
                k += 1
            while j < stop:
                dst_v[k] = src_v[j]
                dst_t[k] = src_t[j]
                j += 1
                k += 1
        src_v, dst_v = dst_v, src_v
        src_t, dst_t = dst_t, src_t
        width *= 2
    return total


def count_sequence_inversions(values, tags=None) -> int:
    """Pairs ``i < j`` with ``(values[i], tags[i]) > (values[j], tags[j])``, by merge sort."""
    v = np.ascontiguousarray(values, dtype=np.float64).reshape(-1)
    t = (np.arange(v.size, dtype=np.int64) if tags is None
         else np.ascontiguousarray(tags, dtype=np.int64).reshape(-1))
    if v.size < 2:
        return 0
    return int(_merge_count(v, t))


def count_inversions(perm_a, perm_b) -> int:
    """Unordered id pairs whose relative order differs between the two permutations."""
    a = np.asarray(perm_a, dtype=np.int64).reshape(-1)
    b = np.asarray(perm_b, dtype=np.int64).reshape(-1)
    if a.size != b.size:
        raise PermutationError(f"permutations of different lengths {a.size} and {b.size}")
    sa = np.sort(a)
    if sa.size and (np.any(sa[1:] == sa[:-1]) or not np.array_equal(sa, np.sort(b))):
        raise PermutationError("inputs are not permutations of the same id set")
    # position of each id in a, read in b's order
    order = np.argsort(a, kind="stable")
    rank_in_a = order[np.searchsorted(sa, b)]
    return count_sequence_inversions(rank_in_a)
