"""Direct checks of the prune-and-search invariants from recorded rounds."""
import math

import numpy as np

from ballsep.planar import level_value_at, prepare_dual

SAMPLES = 100


def run_with_trace(balls, params=None):
    from ballsep.planar import halving_line

    records = []
    result = halving_line(balls, params, records.append)
    return result, records


def _tube(trap, xs):
    root = np.sqrt(1.0 + xs * xs)
    upper = trap["upper"][0] * xs + trap["upper"][1] + root
    lower = trap["lower"][0] * xs + trap["lower"][1] - root
    return lower, upper


def _levels(lines, xs, lam):
    # same products and sums as LineSet.values_at, one row per sample
    vals = xs[:, None] * lines.slopes[None, :] + lines.intercepts[None, :]
    return np.partition(vals, lam - 1, axis=1)[:, lam - 1]


def level_consistency_failures(balls, records):
    """Rounds where the survivors' tracked level differs from the original median level."""
    lines, _, _ = prepare_dual(balls)
    lam0 = (len(lines) + 1) // 2
    bad = []
    for rec in records:
        survivors = lines[np.isin(lines.ids, rec["survivor_ids"])]
        xs = np.linspace(rec["core"][0], rec["core"][1], SAMPLES)
        if not np.array_equal(_levels(survivors, xs, rec["lambda"]), _levels(lines, xs, lam0)):
            bad.append(rec["iteration"])
    return bad


def pruning_failures(balls, records, final_slab):
    """Discarded lines that touch their round's tube somewhere in the final slab."""
    lines, _, _ = prepare_dual(balls)
    xs = np.linspace(final_slab[0], final_slab[1], SAMPLES)
    bad = []
    for rec in records:
        gone = np.isin(lines.ids, rec["discarded_ids"])
        if not gone.any():
            continue
        lower, upper = _tube(rec["trapezoid"], xs)
        vals = lines.slopes[gone][:, None] * xs + lines.intercepts[gone][:, None]
        outside = (vals < lower) | (vals > upper)
        if not outside.all():
            bad.append(rec["iteration"])
    return bad


def _crosses_trapezoid(m, c, trap):
    """Whether each line meets the trapezoid (closed) over its x-range."""
    x0, x1 = trap["x_left"], trap["x_right"]
    am, ac = trap["upper"]
    bm, bc = trap["lower"]
    hit = np.zeros(m.size, dtype=bool)
    cands = [np.full(m.size, x0), np.full(m.size, x1)]
    with np.errstate(divide="ignore", invalid="ignore"):
        cands.append((ac - c) / (m - am))
        cands.append((bc - c) / (m - bm))
    for x in cands:
        x = np.clip(np.nan_to_num(x, nan=x0, posinf=x1, neginf=x0), x0, x1)
        g = m * x + c
        tol = 1e-9 * (1.0 + np.abs(g))
        hit |= (g <= am * x + ac + tol) & (g >= bm * x + bc - tol)
    return hit


def trapezoid_failures(balls, records):
    """Rounds whose trapezoid misses the tracked level or is crossed by over half the lines."""
    lines, _, _ = prepare_dual(balls)
    alive = lines
    bad = []
    for rec in records:
        trap = rec["trapezoid"]
        xs = np.linspace(trap["x_left"], trap["x_right"], SAMPLES)
        for x in xs:
            y = level_value_at(alive, x, rec["lambda_before"])
            top = trap["upper"][0] * x + trap["upper"][1]
            bottom = trap["lower"][0] * x + trap["lower"][1]
            tol = 1e-9 * (1.0 + abs(y))
            if not bottom - tol <= y <= top + tol:
                bad.append((rec["iteration"], "level", float(x)))
                break
        crossing = int(_crosses_trapezoid(alive.slopes, alive.intercepts, trap).sum())
        if crossing > math.ceil(len(alive) / 2):
            bad.append((rec["iteration"], "crossing", crossing, len(alive)))
        alive = alive[np.isin(alive.ids, rec["survivor_ids"])]
    return bad


def progress_failures(records):
    bad = []
    width, count = math.inf, math.inf
    for rec in records:
        w = rec["core"][1] - rec["core"][0]
        if not w < width or rec["survivors"] > count or rec["survivors"] > rec["lines_before"]:
            bad.append(rec["iteration"])
        width, count = w, rec["survivors"]
    return bad
