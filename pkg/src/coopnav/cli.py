"""Command-line entry points: map, postprocess, radiomap, plan, bench, render."""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .evaluation import ROW_FIELDS, BenchmarkError, row_values, run_benchmark, sample_endpoints, spec_summary
from .grid import BinaryGrid, GridError, TernaryGrid
from .io import (
    PGM_OBSTACLE,
    FormatError,
    decode_pgm,
    encode_pgm,
    grid_to_pgm,
    read_path_csv,
    read_pgm_grid,
    weights_to_csv,
    weights_to_pgm,
    write_grid_pgm,
    write_path_csv,
    write_rows_csv,
)
from .mapping import MappingError, error_metrics, run_mapping, waypoint_rows
from .pipeline import benchmark_spec, planning_obstacles, postprocess, radio_map
from .planner import NoPath, PlanError, PlanRequest, plan
from .radio import WEIGHT_NAMES
from .raster import PathError
from .scenario import FIXTURES, Scenario, ScenarioError, fixture_path, load_scenario

log = logging.getLogger("coopnav")

EXIT_USAGE = 2
EXIT_NO_PATH = 3
EXIT_IO = 4
EXIT_SCENARIO = 5

SUMMARY_FIELDS = [
    "algorithm", "alpha", "weight_kind", "distance", "radio_weight",
    "combined", "expanded", "reexpansions", "runtime_ms",
]


class UsageError(Exception):
    pass


def _cell(text: str):
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected n1,n2, got {text!r}") from None
    return (a, b)


def _load(args) -> Scenario:
    path = Path(args.scenario)
    if not path.exists():
        if args.scenario in FIXTURES:
            path = fixture_path(args.scenario)
        else:
            raise UsageError(f"scenario file {args.scenario} not found (fixtures: {', '.join(FIXTURES)})")
    s = load_scenario(path)
    if args.seed is not None:
        s = dataclasses.replace(
            s,
            mapping=dataclasses.replace(s.mapping, seed=args.seed),
            bench=dataclasses.replace(s.bench, seed=args.seed),
        )
    return s


def _out(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _read_map(path, s: Scenario):
    g = read_pgm_grid(path, s.geometry.delta)
    if g.geometry.n != s.geometry.n:
        # a downsampled planning map carries the coarser precision
        factor = s.geometry.n // g.geometry.n
        g = type(g)(dataclasses.replace(g.geometry, delta=s.geometry.delta * factor), g.values)
    return g


def _obstacles(args, s: Scenario) -> BinaryGrid:
    if args.map is None:
        return planning_obstacles(s)
    g = _read_map(args.map, s)
    if isinstance(g, TernaryGrid):
        raise UsageError(f"{args.map} still has undecided cells; run `postprocess` on it first")
    return g


# --- subcommands -------------------------------------------------------------


def cmd_map(args) -> int:
    s = _load(args)
    params = s.mapping if args.n_av is None else dataclasses.replace(s.mapping, n_av=args.n_av)
    truth = s.truth()
    trace = run_mapping(truth, params, s.sensor, s.starts(params.n_av))
    out = _out(args)
    rows = [(repr(t), repr(c), repr(e)) for (t, c), (_, e) in zip(trace.coverage_series, trace.error_series)]
    write_rows_csv(out / "coverage.csv", ["t", "coverage", "p_e"], rows)
    write_grid_pgm(out / "final_map.pgm", trace.final_map)
    write_rows_csv(out / "waypoints.csv", ["t", "av_id", "n1", "n2"], waypoint_rows(trace))
    fp, fn, p_e = error_metrics(trace.final_map, truth)
    write_rows_csv(
        out / "map_summary.csv",
        ["n_av", "seed", "convergence_time", "end_time", "terminated_blocked", "filled_cells", "coverage", "p_e"],
        [(params.n_av, params.seed, repr(trace.convergence_time), repr(trace.end_time),
          int(trace.terminated_blocked), trace.filled_cells, repr(trace.coverage_series[-1][1]), repr(p_e))],
    )
    print(f"coverage {trace.coverage_series[-1][1]:.6f} at t={trace.end_time} s, "
          f"T_eps={trace.convergence_time}, P_e={p_e:.4f}")
    return 0


def cmd_postprocess(args) -> int:
    s = _load(args)
    b_hat = TernaryGrid.from_binary(s.truth()) if args.map is None else _read_map(args.map, s)
    if isinstance(b_hat, BinaryGrid):
        b_hat = TernaryGrid.from_binary(b_hat)
    o = postprocess(s, b_hat)
    out = _out(args)
    write_grid_pgm(out / "obstacles.pgm", o)
    print(f"planning map {o.geometry.n}x{o.geometry.n}, {int(o.values.sum())} obstacle cells")
    return 0


def cmd_radiomap(args) -> int:
    s = _load(args)
    obst = _obstacles(args, s)
    r = radio_map(s, obst, args.weight)
    out = _out(args)
    (out / "radio.pgm").write_bytes(weights_to_pgm(r.values))
    (out / "radio.csv").write_text(weights_to_csv(r.values), newline="")
    print(f"{args.weight or s.weight.name} radio map, max weight {r.values.max():.4f}")
    return 0


def cmd_plan(args) -> int:
    s = _load(args)
    obst = _obstacles(args, s)
    weight = args.weight or s.weight.name
    radio = radio_map(s, obst, weight)
    alpha = s.planner.alpha if args.alpha is None else args.alpha
    algorithm = args.algorithm or s.planner.algorithm
    start = args.start or s.planner.start
    stop = args.stop or s.planner.stop
    if start is None or stop is None:
        start, stop = sample_endpoints(obst, np.random.default_rng(s.bench.seed))
    req = PlanRequest(obst, radio, start, stop, alpha, algorithm)
    t0 = time.perf_counter()
    res = plan(req)
    runtime = (time.perf_counter() - t0) * 1e3
    out = _out(args)
    write_path_csv(out / "path.csv", res.path)
    write_rows_csv(out / "summary.csv", SUMMARY_FIELDS, [(
        req.algorithm.value, repr(req.alpha), weight, repr(res.distance), repr(res.radio_weight),
        repr(res.combined_cost), res.expanded_nodes, res.reexpansions, repr(runtime),
    )])
    print(f"{req.algorithm.value} alpha={req.alpha} {weight}: D={res.distance:.4f} "
          f"R'={res.radio_weight:.4f} g={res.combined_cost:.4f} ({len(res.path)} cells)")
    return 0


def _describe() -> str | None:
    try:
        r = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent, capture_output=True, text=True, timeout=10,
        )
    except (OSError, subprocess.SubprocessError):
        return None
    if r.returncode != 0:
        return None
    return r.stdout.strip() or None


def cmd_bench(args) -> int:
    s = _load(args)
    obst = _obstacles(args, s)
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.alpha is not None:
        overrides["alpha_grid"] = (args.alpha,)
    if args.algorithm is not None:
        overrides["algorithms"] = tuple(dict.fromkeys([s.bench.baseline, args.algorithm]))
    if args.weight is not None:
        overrides["weights"] = (s.weight_kind(args.weight),)
    spec = benchmark_spec(s, obst, **overrides)
    result = run_benchmark(spec)
    out = _out(args)
    write_rows_csv(out / "benchmark.csv", ROW_FIELDS, [row_values(r) for r in result.rows])
    write_rows_csv(
        out / "trials.csv",
        ["trial", "weight", "algorithm", "alpha", "start_n1", "start_n2", "stop_n1", "stop_n2",
         "distance", "radio_weight", "combined", "expanded", "reexpansions", "runtime_ms"],
        [(r.trial, r.weight, r.algorithm, repr(r.alpha), *r.start, *r.stop, repr(r.distance),
          repr(r.radio_weight), repr(r.combined), r.expanded, r.reexpansions, repr(r.runtime_ms))
         for r in result.records],
    )
    manifest = {
        "package": "coopnav",
        "version": __version__,
        "git": _describe(),
        "scenario": str(args.scenario),
        "seed": spec.seed,
        "spec": spec_summary(spec),
        "skipped_trials": result.skipped,
        "effective_trials": spec.trials - len(result.skipped),
        "runtime_columns": ["runtime_increase", "mean_runtime_ms", "runtime_ms"],
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"{len(result.rows)} rows, {manifest['effective_trials']} effective trials")
    return 0


def cmd_render(args) -> int:
    s = _load(args)
    out = _out(args)
    base = s.truth() if args.map is None else _read_map(args.map, s)
    if args.path is None:
        (out / "render.pgm").write_bytes(grid_to_pgm(base))
    else:
        img = decode_pgm(grid_to_pgm(base))
        path = read_path_csv(args.path)
        for a, b in path.points:
            if not base.geometry.contains((a, b)):
                raise UsageError(f"path cell {(a, b)} outside the {base.geometry.n}x{base.geometry.n} map")
            img[a - 1, b - 1] = 64 if img[a - 1, b - 1] != PGM_OBSTACLE else 32
        (out / "render.pgm").write_bytes(encode_pgm(img))
    print(f"wrote {out / 'render.pgm'}")
    return 0


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coopnav", description=__doc__)
    p.add_argument("--version", action="version", version=f"coopnav {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    def common(name, help_, func, map_help=None):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("scenario", help="scenario file or shipped fixture name")
        sp.add_argument("--seed", type=int, default=None, help="override mapping and bench seeds")
        sp.add_argument("--out-dir", default=".", help="output directory (created if missing)")
        if map_help:
            sp.add_argument("--map", default=None, help=map_help)
        sp.set_defaults(func=func)
        return sp

    sp = common("map", "run cooperative mapping", cmd_map)
    sp.add_argument("--n-av", type=int, default=None, help="override the vehicle count")

    common("postprocess", "filter and threshold an estimated map", cmd_postprocess,
           "estimated map PGM (default: the ground truth)")

    sp = common("radiomap", "build a radio weight map", cmd_radiomap,
                "planning map PGM defining the grid (default: post-processed truth)")
    sp.add_argument("--weight", choices=WEIGHT_NAMES, default=None)

    sp = common("plan", "plan one path", cmd_plan, "planning map PGM (default: post-processed truth)")
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--algorithm", choices=["od", "wd", "oa", "wa"], default=None)
    sp.add_argument("--weight", choices=WEIGHT_NAMES, default=None)
    sp.add_argument("--start", type=_cell, default=None, help="n1,n2")
    sp.add_argument("--stop", type=_cell, default=None, help="n1,n2")

    sp = common("bench", "randomized paired benchmark", cmd_bench,
                "planning map PGM (default: post-processed truth)")
    sp.add_argument("--trials", type=int, default=None)
    sp.add_argument("--alpha", type=float, default=None, help="run a single alpha")
    sp.add_argument("--algorithm", choices=["od", "wd", "oa", "wa"], default=None,
                    help="run one algorithm next to the baseline")
    sp.add_argument("--weight", choices=WEIGHT_NAMES, default=None, help="run a single weight kind")

    sp = common("render", "write a grid (optionally with a path) as PGM", cmd_render,
                "grid PGM to render (default: the ground truth)")
    sp.add_argument("--path", default=None, help="path CSV to draw on top")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"coopnav: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoPath as exc:
        print(f"coopnav: no path: {exc}", file=sys.stderr)
        return EXIT_NO_PATH
    except ScenarioError as exc:
        print(f"coopnav: scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except (OSError, FormatError, PathError) as exc:
        print(f"coopnav: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PlanError, MappingError, BenchmarkError, GridError, ValueError) as exc:
        print(f"coopnav: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
