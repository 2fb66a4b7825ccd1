"""Radio-aware path planning: OD, WD, OA and WA on 8-connected grids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..grid import BinaryGrid, Cell, GridError, same_geometry
from ..radio import RadioWeightMap
from ..raster import SQRT2, DiscretePath, step_counts
from . import engine


class PlanError(Exception):
    pass


class NoPath(PlanError):
    pass


class InvalidEndpoint(PlanError):
    pass


class Algorithm(str, Enum):
    OD = "od"
    WD = "wd"
    OA = "oa"
    WA = "wa"

    @property
    def weighted(self) -> bool:
        return self in (Algorithm.WD, Algorithm.WA)

    @property
    def is_astar(self) -> bool:
        return self in (Algorithm.OA, Algorithm.WA)


@dataclass(frozen=True)
class PlanRequest:
    obstacles: BinaryGrid
    radio: RadioWeightMap
    start: Cell
    stop: Cell
    alpha: float = 0.0
    algorithm: Algorithm = Algorithm.WD

    def __post_init__(self):
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        object.__setattr__(self, "start", (int(self.start[0]), int(self.start[1])))
        object.__setattr__(self, "stop", (int(self.stop[0]), int(self.stop[1])))


@dataclass(frozen=True)
class PlanResult:
    path: DiscretePath
    distance: float
    radio_weight: float
    combined_cost: float
    expanded_nodes: int
    reexpansions: int
    converged: bool = True


def f1(path: DiscretePath) -> float:
    """Euclidean path length, computed from step counts so equal-length paths compare exactly."""
    n_orth, n_diag = step_counts(path)
    return n_orth + n_diag * SQRT2


def f2(path: DiscretePath, radio: RadioWeightMap) -> float:
    """Radio weight experienced along the path; each step is weighted by its arrival cell."""
    arr = path.as_array()
    if len(arr) < 2:
        return 0.0
    w = radio.values[arr[1:, 0] - 1, arr[1:, 1] - 1]
    diag = np.abs(np.diff(arr, axis=0)).sum(axis=1) == 2
    # grouped like f1 so that R == 1 reproduces f1 bit for bit
    return float(w[~diag].sum() + w[diag].sum() * SQRT2)


def combined_cost(path: DiscretePath, radio: RadioWeightMap, alpha: float) -> float:
    return f1(path) - alpha * f2(path, radio)


def step_cost(algorithm, radio: RadioWeightMap, alpha: float, frm: Cell, to: Cell) -> float:
    dr, dc = abs(to[0] - frm[0]), abs(to[1] - frm[1])
    if max(dr, dc) != 1:
        raise ValueError(f"cells {frm} and {to} are not adjacent")
    length = SQRT2 if dr + dc == 2 else 1.0
    if Algorithm(algorithm).weighted:
        return (1.0 - alpha * radio[to]) * length
    return length


def heuristic(algorithm, radio: RadioWeightMap, alpha: float, cell: Cell, stop: Cell) -> float:
    algorithm = Algorithm(algorithm)
    if not algorithm.is_astar:
        return 0.0
    d = math.hypot(stop[0] - cell[0], stop[1] - cell[1])
    if algorithm is Algorithm.WA:
        return (1.0 - alpha * radio[cell]) * d
    return d


def has_negative_steps(obstacles: BinaryGrid, radio: RadioWeightMap, alpha: float) -> bool:
    free = obstacles.values == 0
    return bool(free.any() and alpha * radio.values[free].max() > 1.0)


def _check_endpoint(obstacles: BinaryGrid, cell: Cell, what: str) -> None:
    if not obstacles.geometry.contains(cell):
        raise InvalidEndpoint(f"{what} {cell} outside the grid")
    if obstacles[cell]:
        raise InvalidEndpoint(f"{what} {cell} lies on an obstacle")


def plan(request: PlanRequest, max_reexpansions: int | None = None) -> PlanResult:
    """Plan a path from ``request.start`` to ``request.stop``.

    A* variants keep settled cells settled and stop when the goal is popped;
    the WA heuristic may overestimate, so WA paths are not certified optimal.
    With non-negative step costs the Dijkstra variants are label-setting and
    stop as soon as the goal is settled. Once ``alpha * R`` exceeds 1 somewhere,
    step costs turn negative and Dijkstra becomes label-correcting over an
    acyclic predecessor tree, running until the open set drains or the
    re-expansion budget (default: one per grid cell) is spent.
    """
    obstacles, radio, alg = request.obstacles, request.radio, request.algorithm
    try:
        same_geometry(obstacles, radio)
    except GridError as exc:
        raise PlanError(str(exc)) from None
    _check_endpoint(obstacles, request.start, "start")
    _check_endpoint(obstacles, request.stop, "stop")

    n = obstacles.geometry.n
    negative = alg.weighted and has_negative_steps(obstacles, radio, request.alpha)
    if alg is Algorithm.OD or alg is Algorithm.WD:
        heur = engine.HEUR_NONE
    elif alg is Algorithm.OA:
        heur = engine.HEUR_EUCLID
    else:
        heur = engine.HEUR_WEIGHTED
    start = (request.start[0] - 1) * n + request.start[1] - 1
    stop = (request.stop[0] - 1) * n + request.stop[1] - 1
    budget = n * n if max_reexpansions is None else int(max_reexpansions)

    g, pred, expanded, reexp, converged = engine.search(
        obstacles.values.view(np.bool_),
        radio.values,
        float(request.alpha),
        alg.weighted,
        heur,
        start,
        stop,
        alg.is_astar or not negative,
        negative and not alg.is_astar,
        negative and not alg.is_astar,
        budget,
    )
    if not np.isfinite(g[stop]):
        raise NoPath(f"no feasible path from {request.start} to {request.stop}")
    flat = engine.trace_back(pred, start, stop)
    path = DiscretePath(tuple(zip((flat // n + 1).tolist(), (flat % n + 1).tolist())))
    d = f1(path)
    r = f2(path, radio)
    return PlanResult(
        path=path,
        distance=d,
        radio_weight=r,
        combined_cost=d - request.alpha * r,
        expanded_nodes=int(expanded),
        reexpansions=int(reexp),
        converged=bool(converged),
    )
