"""The direction-scanning separator on a 3-d jittered grid.

Shows the parameters it derives, which direction it settles on and how the
measured counts compare with the guarantees.
"""
import warnings

from ballsep import instances, oracle
from ballsep.errors import FallbackWarning
from ballsep.separator import build_directions, find_separator_nd, params_from_alpha

balls = instances.jittered_grid(3, 22, 2.5, seed=5)
n = len(balls)
for alpha in (0.1, 0.25, 0.4):
    params = params_from_alpha(3, n, alpha, strict=False)
    dirs = build_directions(params.k, 3)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FallbackWarning)
        res = find_separator_nd(balls, params)
    cut, _ = oracle.count_intersected(balls, res.plane)
    bound = "none" if res.guaranteed_max_cut is None else f"{res.guaranteed_max_cut:.1f}"
    print(f"alpha={alpha}: n={n} b={params.b} k={params.k} (prime {dirs.source_prime}) "
          f"t={params.t:.2f} conditions={'ok' if params.conditions_met else 'fail'}")
    print(f"   direction {res.direction_index}, spread {res.spread:.2f}, "
          f"sides {res.actual_left}/{res.actual_right} (need {res.guaranteed_min_side}), "
          f"cut {cut} (bound {bound})")
    for note in res.warnings:
        print(f"   note: {note}")
