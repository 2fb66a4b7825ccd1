"""Cooperative obstacle-map discovery by several range-sensing vehicles.

Discrete-time, seeded and single threaded. Each vehicle keeps a local ternary
map, explores towards the nearest undecided cell (plus a small random offset)
and periodically fuses its map into a shared main map, after which it adopts
the main map as its new local copy.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numba import njit
from scipy import ndimage

from .grid import (
    FREE,
    OBSTACLE,
    UNDECIDED,
    BinaryGrid,
    Cell,
    GridError,
    TernaryGrid,
    same_geometry,
)
from .planner import engine

log = logging.getLogger(__name__)

_EIGHT = np.ones((3, 3), dtype=bool)


class MappingError(ValueError):
    pass


@dataclass(frozen=True)
class SensorConfig:
    rho_max: float = 12.0
    ray_count: int = 720
    range_step: float = 0.5

    def __post_init__(self):
        if not self.rho_max > 0:
            raise MappingError("sensor range must be positive")
        if self.ray_count < 8:
            raise MappingError("at least 8 rays per scan are required")
        if not 0 < self.range_step <= 1:
            raise MappingError("ray-march step must lie in (0, 1] cells")


@dataclass(frozen=True)
class MappingParams:
    n_av: int = 4
    sync_period: float = 3.0
    time_step: float = 0.25
    epsilon: float = 1e-4
    offset_range: int = 5
    speed: float = 2.0
    seed: int = 0
    max_time: float = 3600.0
    fill_enclosed: bool = True

    def __post_init__(self):
        if self.n_av < 1:
            raise MappingError("need at least one vehicle")
        if not self.sync_period > 0 or not self.time_step > 0:
            raise MappingError("sync period and time step must be positive")
        if not 0 < self.epsilon < 1:
            raise MappingError("epsilon must lie in (0, 1)")
        if self.offset_range < 0:
            raise MappingError("offset range must be non-negative")
        if not self.speed > 0:
            raise MappingError("speed must be positive")


@dataclass(frozen=True)
class SyncEvent:
    """Local map sent to the main map at time ``t`` (``av_id == -1``: enclosure fill)."""

    t: float
    av_id: int
    local_codes: np.ndarray


@dataclass
class MappingTrace:
    coverage_series: list
    error_series: list
    final_map: TernaryGrid
    convergence_time: float | None
    terminated_blocked: bool
    end_time: float
    waypoint_log: list = field(default_factory=list)
    sync_log: list = field(default_factory=list)
    filled_cells: int = 0


@dataclass
class AvState:
    id: int
    position: Cell
    local_map: np.ndarray
    current_waypoint: Cell | None = None
    next_sync_time: float = 0.0
    route: np.ndarray | None = None
    route_pos: int = 0
    carry: float = 0.0


# --- sensing ---------------------------------------------------------------

@lru_cache(maxsize=16)
def _ray_offsets(ray_count: int, range_step: float, range_cells: float):
    n_samples = int(math.floor(range_cells / range_step + 1e-9))
    s = range_step * np.arange(1, n_samples + 1)
    theta = 2 * np.pi * np.arange(ray_count) / ray_count
    dr = np.floor(np.outer(np.sin(theta), s) + 0.5).astype(np.int64)
    dc = np.floor(np.outer(np.cos(theta), s) + 0.5).astype(np.int64)
    return dr, dc


@njit(cache=True)
def _march(truth, r0, c0, dr, dc, out_r, out_c, out_v):
    nr, nc = truth.shape
    n = 0
    out_r[n] = r0
    out_c[n] = c0
    out_v[n] = 0.0
    n += 1
    for j in range(dr.shape[0]):
        for k in range(dr.shape[1]):
            r = r0 + dr[j, k]
            c = c0 + dc[j, k]
            if r < 0 or r >= nr or c < 0 or c >= nc:
                break
            out_r[n] = r
            out_c[n] = c
            if truth[r, c]:
                out_v[n] = 1.0
                n += 1
                break
            out_v[n] = 0.0
            n += 1
    return n


def _scan_arrays(truth_values: np.ndarray, pose_index, cfg: SensorConfig, delta: float):
    dr, dc = _ray_offsets(cfg.ray_count, cfg.range_step, cfg.rho_max / delta)
    cap = dr.size + 1
    out_r = np.empty(cap, dtype=np.int64)
    out_c = np.empty(cap, dtype=np.int64)
    out_v = np.empty(cap)
    n = _march(truth_values, pose_index[0], pose_index[1], dr, dc, out_r, out_c, out_v)
    return out_r[:n], out_c[:n], out_v[:n]


def sensor_scan(truth: BinaryGrid, pose: Cell, cfg: SensorConfig) -> list:
    """Observed (cell, value) pairs from one scan at ``pose``.

    Rays march outwards in ``range_step`` increments; traversed cells read 0,
    the first obstacle read 1 and ends the ray. Each cell is reported once.
    """
    truth.geometry.check(pose)
    if truth[pose]:
        raise MappingError(f"pose {pose} lies on an obstacle")
    rr, cc, vv = _scan_arrays(truth.values, (pose[0] - 1, pose[1] - 1), cfg, truth.geometry.delta)
    n = truth.geometry.n
    flat, first = np.unique(rr * n + cc, return_index=True)
    return [((int(f // n) + 1, int(f % n) + 1), float(vv[i])) for f, i in zip(flat, first)]


def update_local(local: TernaryGrid, observations) -> TernaryGrid:
    values = np.array(local.values)
    for cell, v in observations:
        local.geometry.check(cell)
        values[cell[0] - 1, cell[1] - 1] = v
    return TernaryGrid(local.geometry, values)


def _fuse(main: np.ndarray, local: np.ndarray) -> np.ndarray:
    return np.where(local != UNDECIDED, local, main)


def fuse_into_main(main: TernaryGrid, local: TernaryGrid) -> TernaryGrid:
    """Decided local cells overwrite the main map; undecided ones leave it untouched."""
    geom = same_geometry(main, local)
    return TernaryGrid(geom, _fuse(main.values, local.values))


# --- metrics ---------------------------------------------------------------

def coverage(m: TernaryGrid) -> float:
    return np.count_nonzero(m.values != UNDECIDED) / m.values.size


def complement_coverage(m: TernaryGrid) -> float:
    return np.count_nonzero(m.values == UNDECIDED) / m.values.size


def error_metrics(est: TernaryGrid, truth: BinaryGrid):
    """False-positive map, false-negative map and the misclassification rate."""
    geom = same_geometry(est, truth)
    fp = (est.values == OBSTACLE) & (truth.values == 0)
    fn = (est.values == FREE) & (truth.values == 1)
    p_e = (np.count_nonzero(fp) + np.count_nonzero(fn)) / fp.size
    return BinaryGrid(geom, fp.astype(np.uint8)), BinaryGrid(geom, fn.astype(np.uint8)), p_e


def _error_rate(est: np.ndarray, truth: np.ndarray) -> float:
    bad = np.count_nonzero((est == OBSTACLE) & (truth == 0)) + np.count_nonzero((est == FREE) & (truth == 1))
    return bad / est.size


def convergence_time(trace: MappingTrace, epsilon: float) -> float:
    """First time in the coverage series at which at most ``epsilon`` is left unexplored."""
    for t, c in trace.coverage_series:
        if c >= 1.0 - epsilon - 1e-12:
            return t
    kind = "blocked" if trace.terminated_blocked else "unfinished"
    raise MappingError(f"coverage never reached 1 - {epsilon} ({kind} run ended at t={trace.end_time})")


# --- waypoints and routes --------------------------------------------------

def reachable_mask(values: np.ndarray, positions) -> np.ndarray:
    """Cells 8-connected to any of ``positions`` (0-based) through non-obstacle cells."""
    labels, _ = ndimage.label(values != OBSTACLE, structure=_EIGHT)
    ids = {labels[p] for p in positions if labels[p] > 0}
    if not ids:
        return np.zeros(values.shape, dtype=bool)
    return np.isin(labels, list(ids))


def _nearest_undecided(values: np.ndarray, position_index, reachable=None):
    cand = values == UNDECIDED
    if reachable is not None:
        cand &= reachable
    idx = np.flatnonzero(cand)
    if idx.size == 0:
        return None
    n = values.shape[1]
    d2 = (idx // n - position_index[0]) ** 2 + (idx % n - position_index[1]) ** 2
    best = idx[np.argmin(d2)]  # ties: flat order is lexicographic (n1, n2)
    return (int(best // n), int(best % n))


def select_waypoint(local: TernaryGrid, position: Cell, rng=None, offset_range: int = 5,
                    offset=None, reachable=None) -> Cell | None:
    """Nearest undecided cell plus a uniform integer offset, clamped into the grid.

    ``offset`` overrides the random draw. If the offset target is a known
    obstacle the plain nearest cell is returned. ``reachable`` (boolean array)
    restricts the candidates.
    """
    nearest = _nearest_undecided(local.values, (position[0] - 1, position[1] - 1), reachable)
    if nearest is None:
        return None
    if offset is None:
        offset = _draw_offset(rng, offset_range)
    r, c = _offset_target(local.values, nearest, offset)
    return (r + 1, c + 1)


def _draw_offset(rng, k: int):
    return rng.integers(-k, k + 1, size=2) if k else (0, 0)


def _offset_target(values: np.ndarray, nearest, offset):
    n1, n2 = values.shape
    r = min(max(nearest[0] + int(offset[0]), 0), n1 - 1)
    c = min(max(nearest[1] + int(offset[1]), 0), n2 - 1)
    if values[r, c] == OBSTACLE:
        return nearest
    return (r, c)


def _route(values: np.ndarray, zeros: np.ndarray, src, dst):
    """Shortest route over non-obstacle cells (undecided counts as passable)."""
    n = values.shape[1]
    blocked = values == OBSTACLE
    if blocked[dst]:
        return None
    s = src[0] * n + src[1]
    d = dst[0] * n + dst[1]
    g, pred, *_ = engine.search(blocked, zeros, 0.0, False, engine.HEUR_NONE, s, d, True, False, False, 0)
    if not np.isfinite(g[d]):
        return None
    return engine.trace_back(pred, s, d)


# --- simulation ------------------------------------------------------------

class _Simulation:
    def __init__(self, truth: BinaryGrid, params: MappingParams, cfg: SensorConfig, starts, record_syncs: bool):
        self.truth = truth
        self.tv = truth.values
        self.params = params
        self.cfg = cfg
        self.n = truth.geometry.n
        self.rng = np.random.default_rng(params.seed)
        self.record_syncs = record_syncs
        self.step_cells = params.speed * params.time_step / truth.geometry.delta
        self.zeros = np.zeros(truth.geometry.shape)
        self.main = np.full(truth.geometry.shape, UNDECIDED)
        self.waypoint_log: list = []
        self.sync_log: list = []
        if len(starts) < params.n_av:
            raise MappingError(f"{params.n_av} vehicles but only {len(starts)} start cells")
        self.avs = []
        for i, cell in enumerate(starts[: params.n_av]):
            if not truth.geometry.contains(cell):
                raise MappingError(f"start {cell} outside the grid")
            if truth[cell]:
                raise MappingError(f"start {cell} lies on an obstacle")
            self.avs.append(AvState(i, (cell[0] - 1, cell[1] - 1), np.full(truth.geometry.shape, UNDECIDED)))
        for av in self.avs:
            av.next_sync_time = float(self.rng.uniform(0.0, params.sync_period))

    def _retarget(self, av: AvState, t: float) -> None:
        av.route = None
        av.current_waypoint = None
        reach = reachable_mask(av.local_map, [av.position])
        nearest = _nearest_undecided(av.local_map, av.position, reach)
        if nearest is None:
            return
        target = _offset_target(av.local_map, nearest, _draw_offset(self.rng, self.params.offset_range))
        route = _route(av.local_map, self.zeros, av.position, target)
        if route is None and target != nearest:
            target = nearest
            route = _route(av.local_map, self.zeros, av.position, target)
        if route is None:
            return
        av.current_waypoint = target
        av.route = route
        av.route_pos = 0
        self.waypoint_log.append((t, av.id, target[0] + 1, target[1] + 1))

    def _route_blocked(self, av: AvState) -> bool:
        rest = av.route[av.route_pos + 1 :]
        return bool((av.local_map.flat[rest] == OBSTACLE).any())

    def _move(self, av: AvState) -> None:
        if av.route is None:
            av.carry = 0.0
            return
        av.carry += self.step_cells
        while av.route_pos + 1 < len(av.route):
            nxt = int(av.route[av.route_pos + 1])
            r, c = divmod(nxt, self.n)
            length = 1.0 if (r == av.position[0] or c == av.position[1]) else math.sqrt(2.0)
            if av.carry < length:
                break
            if self.tv[r, c]:
                # proximity sensing stops the vehicle in front of an unseen obstacle
                av.local_map[r, c] = OBSTACLE
                av.route = None
                av.carry = 0.0
                return
            av.position = (r, c)
            av.route_pos += 1
            av.carry -= length
        if av.route_pos + 1 >= len(av.route):
            av.route = None
            av.current_waypoint = None
            av.carry = 0.0

    def _av_step(self, av: AvState, t: float) -> None:
        rr, cc, vv = _scan_arrays(self.tv, av.position, self.cfg, self.truth.geometry.delta)
        av.local_map[rr, cc] = vv
        if av.route is not None and self._route_blocked(av):
            target = av.current_waypoint
            route = None if av.local_map[target] == OBSTACLE else _route(av.local_map, self.zeros, av.position, target)
            if route is None:
                self._retarget(av, t)
            else:
                av.route, av.route_pos = route, 0
        if av.route is None:
            self._retarget(av, t)
        self._move(av)
        if av.route is None:
            self._retarget(av, t)

    def _blocked(self) -> bool:
        reach = reachable_mask(self.main, [av.position for av in self.avs])
        return not bool(((self.main == UNDECIDED) & reach).any())

    def run(self) -> MappingTrace:
        p = self.params
        n2 = self.main.size
        coverage_series = [(0.0, 0.0)]
        error_series = [(0.0, 0.0)]
        blocked = False
        filled = 0
        converged_at = None
        k = 0
        t = 0.0
        while True:
            k += 1
            t = k * p.time_step
            for av in self.avs:
                self._av_step(av, t)
            synced = False
            for av in self.avs:
                if t >= av.next_sync_time:
                    if self.record_syncs:
                        self.sync_log.append(SyncEvent(t, av.id, (av.local_map * 2).astype(np.uint8)))
                    self.main = _fuse(self.main, av.local_map)
                    av.local_map = self.main.copy()
                    while av.next_sync_time <= t:
                        av.next_sync_time += p.sync_period
                    synced = True
            undecided = np.count_nonzero(self.main == UNDECIDED)
            done = undecided <= p.epsilon * n2 * (1 + 1e-12)
            if not done and synced and self._blocked():
                blocked = True
                if p.fill_enclosed and undecided:
                    fill = np.where(self.main == UNDECIDED, OBSTACLE, UNDECIDED)
                    if self.record_syncs:
                        self.sync_log.append(SyncEvent(t, -1, (fill * 2).astype(np.uint8)))
                    self.main = _fuse(self.main, fill)
                    filled = undecided
                    undecided = 0
            c = 1.0 - undecided / n2
            coverage_series.append((t, c))
            error_series.append((t, _error_rate(self.main, self.tv)))
            if converged_at is None and undecided <= p.epsilon * n2 * (1 + 1e-12):
                converged_at = t
            if done or blocked:
                break
            if t >= p.max_time:
                log.warning("mapping stopped at the time cap t=%s with coverage %.6f", t, c)
                break
        return MappingTrace(
            coverage_series=coverage_series,
            error_series=error_series,
            final_map=TernaryGrid(self.truth.geometry, self.main),
            convergence_time=converged_at,
            terminated_blocked=blocked,
            end_time=t,
            waypoint_log=self.waypoint_log,
            sync_log=self.sync_log,
            filled_cells=filled,
        )


def default_starts(n: int, count: int) -> list:
    """Boundary start cells spread evenly along the perimeter.

    The first vehicle sits at the north midpoint and the rest follow clockwise
    at equal perimeter spacing, so four vehicles land on the north, east, south
    and west midpoints and two vehicles face each other across the map.
    """
    if n < 2:
        return [(1, 1)] * count
    perimeter = 4 * (n - 1)
    out = []
    for k in range(count):
        s = (round(k * perimeter / count) + (n - 1) // 2) % perimeter
        side, off = divmod(s, n - 1)
        out.append([(1, 1 + off), (1 + off, n), (n, n - off), (n - off, 1)][side])
    return out


def run_mapping(truth: BinaryGrid, params: MappingParams, cfg: SensorConfig | None = None,
                starts=None, record_syncs: bool = False) -> MappingTrace:
    """Run cooperative mapping until coverage reaches ``1 - epsilon`` or exploration is blocked.

    When blocked, undecided cells that no vehicle can reach are declared
    obstacles if ``params.fill_enclosed`` is set (solid obstacle interiors are
    never hit by a ray).
    """
    cfg = cfg or SensorConfig()
    if starts is None:
        starts = default_starts(truth.geometry.n, params.n_av)
    try:
        sim = _Simulation(truth, params, cfg, [tuple(s) for s in starts], record_syncs)
    except GridError as exc:
        raise MappingError(str(exc)) from None
    return sim.run()


def replay_syncs(geometry, events) -> TernaryGrid:
    """Rebuild the main map by fusing the logged sync payloads in order."""
    main = np.full(geometry.shape, UNDECIDED)
    for ev in events:
        main = _fuse(main, ev.local_codes / 2.0)
    return TernaryGrid(geometry, main)


def waypoint_rows(trace: MappingTrace):
    return [(repr(t), i, a, b) for t, i, a, b in trace.waypoint_log]


__all__ = [
    "AvState",
    "MappingError",
    "MappingParams",
    "MappingTrace",
    "SensorConfig",
    "SyncEvent",
    "complement_coverage",
    "convergence_time",
    "coverage",
    "default_starts",
    "error_metrics",
    "fuse_into_main",
    "reachable_mask",
    "replay_syncs",
    "run_mapping",
    "select_waypoint",
    "sensor_scan",
    "update_local",
]
