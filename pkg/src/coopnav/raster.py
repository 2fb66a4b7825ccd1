"""Waypoint paths, pixel-adjacent discrete paths and path maps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Cell, GridError, GridGeometry

SQRT2 = math.sqrt(2.0)


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class WaypointPath:
    points: tuple[Cell, ...]

    def __post_init__(self):
        pts = tuple((int(a), int(b)) for a, b in self.points)
        if len(pts) < 2:
            raise PathError("a waypoint path needs at least two points")
        for p, q in zip(pts, pts[1:]):
            if p == q:
                raise PathError(f"consecutive waypoints must differ, got {p} twice")
        object.__setattr__(self, "points", pts)

    @property
    def start(self) -> Cell:
        return self.points[0]

    @property
    def stop(self) -> Cell:
        return self.points[-1]


@dataclass(frozen=True)
class DiscretePath:
    """Cell sequence whose consecutive cells are 8-neighbours."""

    points: tuple[Cell, ...]

    def __post_init__(self):
        pts = tuple((int(a), int(b)) for a, b in self.points)
        if not pts:
            raise PathError("empty path")
        for p, q in zip(pts, pts[1:]):
            if max(abs(p[0] - q[0]), abs(p[1] - q[1])) != 1:
                raise PathError(f"cells {p} and {q} are not adjacent")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=np.int64).reshape(-1, 2)

    def reversed(self) -> DiscretePath:
        return DiscretePath(self.points[::-1])


def step_counts(path: DiscretePath) -> tuple[int, int]:
    """Number of (orthogonal, diagonal) steps."""
    arr = path.as_array()
    if len(arr) < 2:
        return 0, 0
    d = np.abs(np.diff(arr, axis=0)).sum(axis=1)
    n_diag = int((d == 2).sum())
    return len(d) - n_diag, n_diag


def step_lengths(path: DiscretePath) -> np.ndarray:
    """Euclidean length of each step, aligned with ``path.points[1:]``."""
    arr = path.as_array()
    if len(arr) < 2:
        return np.zeros(0)
    d = np.abs(np.diff(arr, axis=0)).sum(axis=1)
    return np.where(d == 2, SQRT2, 1.0)


def bresenham_segment(p: Cell, q: Cell) -> DiscretePath:
    """Rasterize the segment p -> q, both endpoints included.

    Integer-error formulation covering all octants; on an exact half-step the
    minor axis advances (error >= 0 rule).
    """
    r0, c0 = int(p[0]), int(p[1])
    r1, c1 = int(q[0]), int(q[1])
    dc = abs(c1 - c0)
    dr = -abs(r1 - r0)
    sc = 1 if c0 < c1 else -1
    sr = 1 if r0 < r1 else -1
    err = dc + dr
    out = [(r0, c0)]
    while (r0, c0) != (r1, c1):
        e2 = 2 * err
        if e2 >= dr:
            err += dr
            c0 += sc
        if e2 <= dc:
            err += dc
            r0 += sr
        out.append((r0, c0))
    return DiscretePath(tuple(out))


def densify_path(w: WaypointPath) -> DiscretePath:
    cells: list[Cell] = [w.points[0]]
    for p, q in zip(w.points, w.points[1:]):
        cells.extend(bresenham_segment(p, q).points[1:])
    return DiscretePath(tuple(cells))


@dataclass(frozen=True)
class PathMap:
    """Sparse path map: step length of the incoming step at each path cell."""

    geometry: GridGeometry
    step_length: dict

    def __getitem__(self, cell: Cell) -> float:
        self.geometry.check(cell)
        return self.step_length.get(tuple(cell), 0.0)

    def total(self) -> float:
        return float(sum(self.step_length.values()))

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.geometry.shape)
        for (n1, n2), v in self.step_length.items():
            out[n1 - 1, n2 - 1] = v
        return out


def path_map(c: DiscretePath, geom: GridGeometry) -> PathMap:
    """Path map of ``c``; rejects paths that revisit a cell."""
    entries: dict = {}
    lengths = step_lengths(c)
    for m, cell in enumerate(c.points):
        if not geom.contains(cell):
            raise GridError(f"path cell {cell} outside the grid")
        if cell in entries:
            raise PathError(f"path revisits cell {cell}")
        entries[cell] = 0.0 if m == 0 else float(lengths[m - 1])
    return PathMap(geom, entries)
