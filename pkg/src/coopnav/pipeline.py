"""Glue between a scenario and the mapping, post-processing, radio and benchmark stages."""

from __future__ import annotations

import dataclasses

from .evaluation import BenchmarkSpec
from .grid import BinaryGrid, TernaryGrid
from .postprocess import postprocess_obstacles
from .radio import AccessPoint, RadioWeightMap, build_radio_map
from .scenario import Scenario


def postprocess(scenario: Scenario, b_hat: TernaryGrid) -> BinaryGrid:
    p = scenario.post
    return postprocess_obstacles(b_hat, p.kernel_size, p.kernel_radius, p.downsample, p.tau)


def planning_obstacles(scenario: Scenario) -> BinaryGrid:
    """Planning map O from the ground truth, as if mapping had converged without error."""
    return postprocess(scenario, TernaryGrid.from_binary(scenario.truth()))


def scaled_access_points(scenario: Scenario, factor: int) -> tuple:
    """Access points moved onto a grid downsampled by ``factor`` (keep-first-cell phase)."""
    if factor == 1:
        return scenario.access_points
    return tuple(
        AccessPoint(((ap.center[0] - 1) // factor + 1, (ap.center[1] - 1) // factor + 1), ap.coverage_radius / factor)
        for ap in scenario.access_points
    )


def radio_map(scenario: Scenario, obstacles: BinaryGrid, weight: str | None = None) -> RadioWeightMap:
    """Radio weights on the grid of ``obstacles`` (which may be downsampled)."""
    factor = scenario.geometry.n // obstacles.geometry.n if obstacles.geometry.n != scenario.geometry.n else 1
    return build_radio_map(scaled_access_points(scenario, factor), scenario.weight_kind(weight), obstacles.geometry)


def benchmark_spec(scenario: Scenario, obstacles: BinaryGrid | None = None, **overrides) -> BenchmarkSpec:
    """Benchmark spec from the scenario's bench section; keyword overrides replace single fields."""
    obstacles = planning_obstacles(scenario) if obstacles is None else obstacles
    b = scenario.bench
    factor = scenario.geometry.n // obstacles.geometry.n if obstacles.geometry.n != scenario.geometry.n else 1
    spec = BenchmarkSpec(
        obstacles=obstacles,
        access_points=scaled_access_points(scenario, factor),
        weights=tuple(scenario.weight_kind(w) for w in b.weights),
        alpha_grid=b.alphas,
        algorithms=b.algorithms,
        trials=b.trials,
        seed=b.seed,
        baseline=b.baseline,
    )
    return dataclasses.replace(spec, **overrides) if overrides else spec
