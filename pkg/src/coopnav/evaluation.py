"""Paired benchmark harness: random endpoint sweeps over alpha and weight kinds."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .grid import BinaryGrid, Cell, GridGeometry
from .planner import Algorithm, PlanError, PlanRequest, plan
from .radio import RadioWeightMap, WeightKind, build_radio_map

log = logging.getLogger(__name__)

_EIGHT = np.ones((3, 3), dtype=bool)


class BenchmarkError(ValueError):
    pass


@dataclass(frozen=True)
class BenchmarkSpec:
    obstacles: BinaryGrid
    access_points: tuple
    weights: tuple = (WeightKind("amplitude"),)
    alpha_grid: tuple = (0.0, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0)
    algorithms: tuple = ("od", "wd", "oa", "wa")
    trials: int = 500
    seed: int = 0
    baseline: str = "oa"
    max_resamples: int = 1000

    def __post_init__(self):
        algs = tuple(Algorithm(a) for a in self.algorithms)
        object.__setattr__(self, "algorithms", algs)
        object.__setattr__(self, "baseline", Algorithm(self.baseline))
        object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))
        object.__setattr__(self, "access_points", tuple(self.access_points))
        object.__setattr__(self, "weights", tuple(self.weights))
        if self.trials < 1:
            raise BenchmarkError(f"trials must be >= 1, got {self.trials}")
        if self.baseline not in algs:
            raise BenchmarkError(f"baseline {self.baseline.value} is not among the algorithms")
        if not self.alpha_grid or min(self.alpha_grid) < 0:
            raise BenchmarkError("alpha grid must be non-empty and non-negative")
        if not self.weights:
            raise BenchmarkError("at least one weight kind is required")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    weight: str
    algorithm: str
    alpha: float
    start: Cell
    stop: Cell
    distance: float
    radio_weight: float
    combined: float
    runtime_ms: float
    expanded: int
    reexpansions: int


@dataclass(frozen=True)
class BenchmarkRow:
    weight: str
    algorithm: str
    alpha: float
    distance_increase: float
    radio_increase: float
    combined_decrease: float
    runtime_increase: float
    trials: int
    mean_distance: float
    mean_radio_weight: float
    mean_combined: float
    mean_runtime_ms: float
    mean_expanded: float


ROW_FIELDS = [
    "weight",
    "algorithm",
    "alpha",
    "distance_increase",
    "radio_increase",
    "combined_decrease",
    "runtime_increase",
    "trials",
    "mean_distance",
    "mean_radio_weight",
    "mean_combined",
    "mean_runtime_ms",
    "mean_expanded",
]
RUNTIME_FIELDS = ("runtime_increase", "mean_runtime_ms")


@dataclass
class BenchmarkResult:
    rows: list
    records: list
    endpoints: list
    skipped: list


def percent_change(value: float, baseline: float) -> float:
    if not baseline > 0:
        raise BenchmarkError(f"percent change needs a positive baseline, got {baseline}")
    return float(100.0 * (value - baseline) / baseline)


def _pct_or_nan(value: float, baseline: float) -> float:
    return percent_change(value, baseline) if baseline > 0 else math.nan


def sample_endpoints(obstacles: BinaryGrid, rng: np.random.Generator, max_resamples: int = 1000):
    """Draw two distinct free cells, uniformly over free cells, that are 8-connected to each other."""
    free = obstacles.values == 0
    cells = np.flatnonzero(free)
    if cells.size < 2:
        raise BenchmarkError(f"need at least 2 free cells, map has {cells.size}")
    labels, _ = ndimage.label(free, structure=_EIGHT)
    flat = labels.ravel()
    n = obstacles.geometry.n
    for _ in range(max_resamples):
        a, b = rng.choice(cells, size=2, replace=False)
        if flat[a] == flat[b]:
            return (int(a // n + 1), int(a % n + 1)), (int(b // n + 1), int(b % n + 1))
    raise BenchmarkError(f"no connected endpoint pair after {max_resamples} draws")


def warm_up() -> None:
    """Compile the search kernels so the first timed call is not a JIT build."""
    geom = GridGeometry(4, 1.0)
    obst = BinaryGrid.empty(geom)
    radio = RadioWeightMap.uniform(geom, 0.5)
    for alg in Algorithm:
        for alpha in (0.0, 3.0):
            plan(PlanRequest(obst, radio, (1, 1), (4, 4), alpha, alg))


def run_trials(spec: BenchmarkSpec) -> BenchmarkResult:
    """Run every (weight, algorithm, alpha) configuration on shared random endpoints."""
    rng = np.random.default_rng(spec.seed)
    geom = spec.obstacles.geometry
    radio_maps = [(k, build_radio_map(spec.access_points, k, geom)) for k in spec.weights]
    warm_up()
    records, endpoints, skipped = [], [], []
    for trial in range(spec.trials):
        start, stop = sample_endpoints(spec.obstacles, rng, spec.max_resamples)
        endpoints.append((start, stop))
        batch = []
        try:
            for kind, radio in radio_maps:
                for alg in spec.algorithms:
                    for alpha in spec.alpha_grid:
                        req = PlanRequest(spec.obstacles, radio, start, stop, alpha, alg)
                        t0 = time.perf_counter()
                        res = plan(req)
                        dt = (time.perf_counter() - t0) * 1e3
                        batch.append(TrialRecord(
                            trial, kind.name, alg.value, alpha, start, stop,
                            res.distance, res.radio_weight, res.combined_cost, dt,
                            res.expanded_nodes, res.reexpansions,
                        ))
        except PlanError as exc:
            log.warning("trial %d skipped (%s -> %s): %s", trial, start, stop, exc)
            skipped.append(trial)
            continue
        records.extend(batch)
    return BenchmarkResult([], records, endpoints, skipped)


def _mean_paired_pct(values: np.ndarray, base: np.ndarray, sign: float = 1.0) -> float:
    """Mean of per-trial percent changes over trials whose baseline is positive.

    ``sign=-1`` reports a decrease instead of an increase.
    """
    ok = base > 0
    if not ok.any():
        return math.nan
    return float(np.mean(100.0 * sign * (values[ok] - base[ok]) / base[ok])) + 0.0


def aggregate(records, baseline: str = "oa") -> list:
    """One row per (weight, algorithm, alpha) against the baseline at the same weight and alpha.

    Distance, radio weight and combined metric are means of per-trial paired
    percent changes; trials whose baseline value is not positive (a baseline
    path outside every coverage disc has zero radio weight) are left out of
    that metric's mean. Runtime is the percent change of the mean runtimes.
    """
    baseline = Algorithm(baseline).value
    groups: dict = {}
    for r in records:
        groups.setdefault((r.weight, r.algorithm, r.alpha), {})[r.trial] = r
    rows = []
    for key in sorted(groups):
        weight, alg, alpha = key
        base = groups.get((weight, baseline, alpha))
        if base is None:
            raise BenchmarkError(f"baseline {baseline} missing for weight={weight} alpha={alpha}")
        trials = sorted(groups[key])
        if trials != sorted(base):
            raise BenchmarkError(f"{key} is not paired with the baseline trials")
        cur = [groups[key][t] for t in trials]
        ref = [base[t] for t in trials]
        col = lambda rs, name: np.array([getattr(r, name) for r in rs], dtype=float)  # noqa: E731
        t_mean, t_base = col(cur, "runtime_ms").mean(), col(ref, "runtime_ms").mean()
        rows.append(BenchmarkRow(
            weight=weight,
            algorithm=alg,
            alpha=alpha,
            distance_increase=_mean_paired_pct(col(cur, "distance"), col(ref, "distance")),
            radio_increase=_mean_paired_pct(col(cur, "radio_weight"), col(ref, "radio_weight")),
            combined_decrease=_mean_paired_pct(col(cur, "combined"), col(ref, "combined"), -1.0),
            runtime_increase=_pct_or_nan(t_mean, t_base),
            trials=len(trials),
            mean_distance=float(col(cur, "distance").mean()),
            mean_radio_weight=float(col(cur, "radio_weight").mean()),
            mean_combined=float(col(cur, "combined").mean()),
            mean_runtime_ms=float(t_mean),
            mean_expanded=float(col(cur, "expanded").mean()),
        ))
    return rows


def run_benchmark(spec: BenchmarkSpec) -> BenchmarkResult:
    result = run_trials(spec)
    result.rows = aggregate(result.records, spec.baseline)
    return result


def row_values(row: BenchmarkRow, include_runtime: bool = True) -> list:
    out = []
    for name in ROW_FIELDS:
        if not include_runtime and name in RUNTIME_FIELDS:
            continue
        v = getattr(row, name)
        out.append(repr(v) if isinstance(v, float) else v)
    return out


def spec_summary(spec: BenchmarkSpec) -> dict:
    """JSON-friendly description of a spec (the obstacle map is summarized, not dumped)."""
    geom = spec.obstacles.geometry
    return {
        "grid": {"n": geom.n, "delta": geom.delta, "obstacle_cells": int(spec.obstacles.values.sum())},
        "access_points": [
            {"center": list(ap.center), "radius": ap.coverage_radius} for ap in spec.access_points
        ],
        "weights": [{"name": k.name, "gamma": k.gamma, "beta": k.beta} for k in spec.weights],
        "alpha_grid": list(spec.alpha_grid),
        "algorithms": [a.value for a in spec.algorithms],
        "trials": spec.trials,
        "seed": spec.seed,
        "baseline": spec.baseline.value,
    }


__all__ = [
    "BenchmarkError",
    "BenchmarkResult",
    "BenchmarkRow",
    "BenchmarkSpec",
    "ROW_FIELDS",
    "RUNTIME_FIELDS",
    "TrialRecord",
    "aggregate",
    "percent_change",
    "row_values",
    "run_benchmark",
    "run_trials",
    "sample_endpoints",
    "spec_summary",
    "warm_up",
]
