"""How many disks the planar halving line cuts as n grows.

For a square grid the best line cuts about sqrt(n) disks; the table prints
the measured count next to sqrt(n) and sqrt(n log n).
"""
import math

from ballsep import instances, oracle
from ballsep.planar import halving_line

print(f"{'n':>7} {'cut':>5} {'sqrt n':>7} {'sqrt(n ln n)':>12} {'rounds':>6}")
for n in (101, 401, 1601, 6401, 25601):
    balls = instances.jittered_grid(2, instances.grid_side(n, 2), 2.5, seed=1, n=n)
    res = halving_line(balls)
    cut, _ = oracle.count_intersected(balls, res.plane)
    print(f"{n:7d} {cut:5d} {math.sqrt(n):7.1f} {math.sqrt(n * math.log(n)):12.1f} {res.iterations:6d}")
