import math

import numpy as np
import pytest
from scipy import ndimage

from coopnav.evaluation import (
    BenchmarkError,
    BenchmarkSpec,
    aggregate,
    percent_change,
    row_values,
    run_benchmark,
    sample_endpoints,
)
from coopnav.grid import BinaryGrid, GridGeometry
from coopnav.radio import AccessPoint, WeightKind

from .conftest import random_obstacles


def test_percent_change_examples():
    assert percent_change(11, 10) == pytest.approx(10.0)
    assert percent_change(10, 10) == 0.0
    assert percent_change(5, 10) == -50.0
    for base in (0.0, -1.0):
        with pytest.raises(BenchmarkError):
            percent_change(1.0, base)


def test_endpoints_on_free_map():
    free = BinaryGrid.empty(GridGeometry(6, 1.0))
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b = sample_endpoints(free, rng)
        assert a != b and free.is_free(a) and free.is_free(b)


def test_endpoints_need_two_free_cells():
    v = np.ones((4, 4), dtype=np.uint8)
    v[0, 0] = 0
    with pytest.raises(BenchmarkError):
        sample_endpoints(BinaryGrid(GridGeometry(4, 1.0), v), np.random.default_rng(0))


def test_endpoints_fail_without_connected_pair():
    v = np.ones((5, 5), dtype=np.uint8)
    v[0, 0] = v[4, 4] = 0
    with pytest.raises(BenchmarkError):
        sample_endpoints(BinaryGrid(GridGeometry(5, 1.0), v), np.random.default_rng(0), max_resamples=20)


def _component_oracle(values, a, b):
    """Flood fill from ``a`` over free cells with 8-neighbours."""
    n = values.shape[0]
    seen, stack = {a}, [a]
    while stack:
        r, c = stack.pop()
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                q = (r + dr, c + dc)
                if 1 <= q[0] <= n and 1 <= q[1] <= n and q not in seen and not values[q[0] - 1, q[1] - 1]:
                    seen.add(q)
                    stack.append(q)
    return b in seen


def test_endpoints_stay_in_one_component():
    v = np.zeros((10, 10), dtype=np.uint8)
    v[:, 4] = 1
    grid = BinaryGrid(GridGeometry(10, 1.0), v)
    rng = np.random.default_rng(1)
    sides = set()
    for _ in range(200):
        a, b = sample_endpoints(grid, rng)
        assert _component_oracle(v, a, b)
        sides.add(a[1] < 5)
    assert sides == {True, False}


def test_endpoints_on_random_maps_are_connected():
    rng = np.random.default_rng(2)
    for _ in range(30):
        g = random_obstacles(rng, 12, 0.4)
        if np.count_nonzero(g.values == 0) < 2:
            continue
        labels, k = ndimage.label(g.values == 0, structure=np.ones((3, 3)))
        if max(np.bincount(labels.ravel())[1:], default=0) < 2:
            continue
        a, b = sample_endpoints(g, rng)
        assert _component_oracle(g.values, a, b)


def _spec(**kw):
    rng = np.random.default_rng(5)
    obst = random_obstacles(rng, 16, 0.15)
    base = dict(
        obstacles=obst,
        access_points=(AccessPoint((6, 6), 6.0), AccessPoint((12, 11), 5.0)),
        weights=(WeightKind("amplitude"), WeightKind("onoff")),
        alpha_grid=(0.0, 0.5),
        trials=12,
        seed=3,
    )
    base.update(kw)
    return BenchmarkSpec(**base)


def test_spec_validation():
    with pytest.raises(BenchmarkError):
        _spec(trials=0)
    with pytest.raises(BenchmarkError):
        _spec(algorithms=("wd",), baseline="oa")
    with pytest.raises(BenchmarkError):
        _spec(alpha_grid=(-0.1,))
    with pytest.raises(ValueError):
        _spec(algorithms=("xx",))


def test_od_only_spec_reports_zero_changes():
    res = run_benchmark(_spec(algorithms=("od",), baseline="od"))
    assert res.rows
    for row in res.rows:
        assert row.distance_increase == 0.0
        assert row.combined_decrease == 0.0
        assert row.runtime_increase == 0.0
        assert row.radio_increase == 0.0 or math.isnan(row.radio_increase)


@pytest.fixture(scope="module")
def bench():
    return _spec(), run_benchmark(_spec())


def test_rows_sorted_and_complete(bench):
    spec, res = bench
    keys = [(r.weight, r.algorithm, r.alpha) for r in res.rows]
    assert keys == sorted(keys)
    assert len(keys) == len(spec.weights) * len(spec.algorithms) * len(spec.alpha_grid)
    assert all(r.trials == spec.trials - len(res.skipped) for r in res.rows)


def test_alpha_zero_has_no_distance_increase(bench):
    _, res = bench
    for row in res.rows:
        if row.alpha == 0.0:
            assert row.distance_increase == 0.0


def test_pairing(bench):
    _, res = bench
    by_trial = {}
    for r in res.records:
        by_trial.setdefault(r.trial, set()).add((r.start, r.stop))
    assert all(len(s) == 1 for s in by_trial.values())
    assert [next(iter(by_trial[t])) for t in sorted(by_trial)] == res.endpoints


def test_wd_dominates_od_per_trial(bench):
    _, res = bench
    idx = {(r.trial, r.weight, r.algorithm, r.alpha): r for r in res.records}
    for (t, w, alg, a), r in idx.items():
        if alg == "wd":
            assert r.combined <= idx[(t, w, "od", a)].combined + 1e-9


def test_distance_lower_bound(bench):
    _, res = bench
    od = {(r.trial, r.weight): r.distance for r in res.records if r.algorithm == "od"}
    for r in res.records:
        assert r.distance >= od[(r.trial, r.weight)] - 1e-9


def test_reproducible_without_runtime(bench):
    spec, res = bench
    again = run_benchmark(spec)
    assert [row_values(r, False) for r in again.rows] == [row_values(r, False) for r in res.rows]


def test_aggregate_rejects_unpaired(bench):
    _, res = bench
    broken = [r for r in res.records if not (r.algorithm == "wd" and r.trial == 0)]
    with pytest.raises(BenchmarkError):
        aggregate(broken)
    with pytest.raises(BenchmarkError):
        aggregate([r for r in res.records if r.algorithm != "oa"])
