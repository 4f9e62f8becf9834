"""Walk through one planar halving run round by round and draw it.

Writes ``walkthrough_primal.svg`` plus one ``walkthrough_round_NNN.svg``
per prune-and-search round into the current directory.
"""
import sys

from ballsep import instances, oracle
from ballsep.planar import halving_line, prepare_dual
from ballsep.svg import dual_svg, primal_svg

n = int(sys.argv[1]) if len(sys.argv) > 1 else 401
balls = instances.jittered_grid(2, instances.grid_side(n, 2), 2.5, seed=3, n=n)

records = []
result = halving_line(balls, trace=records.append)
lines, _, _ = prepare_dual(balls)
print(f"{n} disks, {result.iterations} rounds, stop reason: {result.stop_reason}")

alive = lines
for rec in records:
    print(f"  round {rec['iteration']}: {rec['lines_before']:5d} lines -> {rec['survivors']:5d}, "
          f"subslabs {rec['m']}, chose {rec['chosen']}, level {rec['lambda_before']} -> {rec['lambda']}")
    path = f"walkthrough_round_{rec['iteration']:03d}.svg"
    with open(path, "w") as fh:
        fh.write(dual_svg(alive, rec))
    keep = set(rec["survivor_ids"])
    alive = alive[[int(i) in keep for i in alive.ids]]

left, right, on = oracle.count_sides(balls, result.plane)
cut, ids = oracle.count_intersected(balls, result.plane)
print(f"closed sides {left + on} / {right + on}, disks cut {cut}")
with open("walkthrough_primal.svg", "w") as fh:
    fh.write(primal_svg(balls, result.plane, ids, (left + on, right + on, cut)))
