"""Reproducible disjoint unit-ball instances and the plain-text instance format.

File format: first non-comment line ``d n``, then ``n`` lines of ``d``
coordinates separated by single spaces. Lines starting with ``#`` are
comments. Radii are implicitly 1.
"""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import DomainError, ParseError, SpacingError
from .geometry import BallSet

MIN_SPACING = 2.2
JITTER_MARGIN = 0.05

_MASK = (1 << 64) - 1


def splitmix64(x):
    """SplitMix64 finaliser on uint64 arrays (wrapping arithmetic)."""
    z = np.asarray(x, dtype=np.uint64) + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _unit_uniform(seed: int, index: np.ndarray, d: int) -> np.ndarray:
    """Deterministic values in [0, 1) keyed by (seed, index, coordinate)."""
    flat = index.astype(np.uint64)[:, None] * np.uint64(d) + np.arange(d, dtype=np.uint64)
    with np.errstate(over="ignore"):
        key = splitmix64(np.uint64(seed & _MASK))
        h = splitmix64(key ^ splitmix64(flat))
    return (h >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


def grid_side(n: int, d: int) -> int:
    """Smallest ``s`` with ``s**d >= n``."""
    s = max(1, int(round(n ** (1.0 / d))))
    while s ** d < n:
        s += 1
    while s > 1 and (s - 1) ** d >= n:
        s -= 1
    return s


def jittered_grid(d: int, side: int, spacing: float = 2.5, seed: int = 0, n: int = None) -> BallSet:
    """``side**d`` jittered grid centers (or the first ``n`` in row-major order).

    Each coordinate moves by at most ``(spacing - 2)/2 - 0.05``, so every
    pair of centers stays at distance at least 2.1.
    """
    if spacing < MIN_SPACING:
        raise SpacingError(f"spacing {spacing!r} is below {MIN_SPACING}")
    if d < 1 or side < 1:
        raise DomainError("d and side must be positive")
    total = side ** d
    if n is None:
        n = total
    if not 0 <= n <= total:
        raise DomainError(f"cannot take {n} points from a grid of {total}")
    index = np.arange(n)
    cells = np.stack(np.unravel_index(index, (side,) * d), axis=1).astype(float)
    amp = (spacing - 2.0) / 2.0 - JITTER_MARGIN
    jitter = amp * (2.0 * _unit_uniform(seed, index, d) - 1.0)
    return BallSet(cells * spacing + jitter, validate=False)


def collinear_row(n: int, spacing: float = 3.0, d: int = 2) -> BallSet:
    if spacing < MIN_SPACING:
        raise SpacingError(f"spacing {spacing!r} is below {MIN_SPACING}")
    centers = np.zeros((n, d))
    centers[:, 0] = np.arange(n) * spacing
    return BallSet(centers, validate=False)


def clusters(d: int, n: int, n_clusters: int, seed: int = 0, spacing: float = 2.5) -> BallSet:
    """``n`` centers split over ``n_clusters`` jittered sub-grids placed far apart.

    Cluster ``c`` uses seed ``seed + c``; a single cluster reproduces
    ``jittered_grid(d, grid_side(n, d), spacing, seed, n)``.
    """
    if spacing < MIN_SPACING:
        raise SpacingError(f"spacing {spacing!r} is below {MIN_SPACING}")
    if n_clusters < 1 or n < n_clusters:
        raise DomainError("need 1 <= n_clusters <= n")
    sizes = [n // n_clusters + (1 if c < n % n_clusters else 0) for c in range(n_clusters)]
    extent = grid_side(sizes[0], d) * spacing
    cell = 4.0 * extent
    coarse = grid_side(n_clusters, d)
    parts = []
    for c, size in enumerate(sizes):
        part = jittered_grid(d, grid_side(size, d), spacing, seed + c, size).centers
        origin = np.array(np.unravel_index(c, (coarse,) * d), dtype=float) * cell
        # shear alternate clusters so the layout is not a plain lattice
        origin[0] += (c % 3) * 0.37 * extent
        parts.append(part + origin)
    return BallSet(np.vstack(parts), validate=False)


def save(balls: BallSet, path) -> None:
    lines = [f"{balls.dim} {len(balls)}"]
    for row in balls.centers:
        lines.append(" ".join(format(float(x), ".17g") for x in row))
    Path(path).write_text("\n".join(lines) + "\n")


def parse(text: str) -> BallSet:
    header = None
    rows = []
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            try:
                if len(parts) != 2:
                    raise ValueError
                d, n = int(parts[0]), int(parts[1])
                if d < 1 or n < 0:
                    raise ValueError
            except ValueError:
                raise ParseError(lineno, f"expected header 'd n', got {line!r}") from None
            header = (d, n)
            continue
        d, n = header
        if len(rows) == n:
            raise ParseError(lineno, f"more than the declared {n} centers")
        if len(parts) != d:
            raise ParseError(lineno, f"expected {d} coordinates, got {len(parts)}")
        try:
            row = [float(x) for x in parts]
        except ValueError:
            raise ParseError(lineno, f"bad coordinate in {line!r}") from None
        if not all(math.isfinite(x) for x in row):
            raise ParseError(lineno, "non-finite coordinate")
        rows.append(row)
    if header is None:
        raise ParseError(max(last, 1), "missing header 'd n'")
    d, n = header
    if len(rows) != n:
        raise ParseError(last, f"declared {n} centers, found {len(rows)}")
    return BallSet(np.array(rows, dtype=float).reshape(n, d))


def load(path) -> BallSet:
    return parse(Path(path).read_text())
