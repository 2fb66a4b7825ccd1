"""Brute-force optimal-path oracle for small grids (testing only)."""

from __future__ import annotations

import math
import sys

from ..grid import BinaryGrid, Cell
from ..radio import RadioWeightMap
from ..raster import DiscretePath
from .core import NoPath

_NEIGHBOURS = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]


def _octile(a: Cell, b: Cell) -> float:
    dr, dc = abs(a[0] - b[0]), abs(a[1] - b[1])
    return max(dr, dc) + (math.sqrt(2) - 1) * min(dr, dc)


def exhaustive_optimal_path(obstacles: BinaryGrid, radio: RadioWeightMap, alpha: float,
                            start: Cell, stop: Cell, max_cells: int = 64):
    """Minimum of ``F1 - alpha * F2`` over all simple feasible paths.

    Depth-first enumeration. When every step cost is non-negative two prunings
    are safe and switched on: a bound (prefix cost + scaled octile distance
    cannot beat the incumbent) and a per-cell best-prefix memo. With negative
    steps every simple path is enumerated.

    Returns ``(g, DiscretePath)``.
    """
    n = obstacles.geometry.n
    if n * n > max_cells:
        raise ValueError(f"{n}x{n} grid exceeds the oracle limit of {max_cells} cells")
    vals = obstacles.values
    rad = radio.values
    free = lambda c: 1 <= c[0] <= n and 1 <= c[1] <= n and vals[c[0] - 1, c[1] - 1] == 0  # noqa: E731
    if not (free(start) and free(stop)):
        raise NoPath("endpoint on an obstacle or outside the grid")

    rmax = max((rad[i, j] for i in range(n) for j in range(n) if vals[i, j] == 0), default=0.0)
    lb_scale = 1.0 - alpha * rmax
    prune = lb_scale >= 0

    best = [math.inf, None]
    memo: dict = {}
    on_path = {start}
    trail = [start]

    def dfs(u: Cell, cost: float) -> None:
        if u == stop:
            if cost < best[0]:
                best[0] = cost
                best[1] = tuple(trail)
            return
        if prune:
            if cost >= memo.get(u, math.inf):
                return
            memo[u] = cost
            if cost + lb_scale * _octile(u, stop) >= best[0]:
                return
        nbrs = [(u[0] + dr, u[1] + dc) for dr, dc in _NEIGHBOURS]
        nbrs.sort(key=lambda v: _octile(v, stop))
        for v in nbrs:
            if v in on_path or not free(v):
                continue
            length = math.sqrt(2) if v[0] != u[0] and v[1] != u[1] else 1.0
            on_path.add(v)
            trail.append(v)
            dfs(v, cost + (1.0 - alpha * rad[v[0] - 1, v[1] - 1]) * length)
            trail.pop()
            on_path.discard(v)

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * max_cells + 100))
    try:
        dfs(start, 0.0)
    finally:
        sys.setrecursionlimit(limit)
    if best[1] is None:
        raise NoPath(f"no feasible path from {start} to {stop}")
    return best[0], DiscretePath(best[1])
