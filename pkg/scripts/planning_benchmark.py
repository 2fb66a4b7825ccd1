"""Paired planning benchmark with a compact percent-change table.

    python3 scripts/planning_benchmark.py sec72_planning --trials 100 --out bench.csv
"""

import argparse
import csv
import sys

from coopnav.evaluation import ROW_FIELDS, run_benchmark, row_values
from coopnav.pipeline import benchmark_spec
from coopnav.scenario import FIXTURES, fixture_path, load_scenario


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("scenario", help="scenario file or fixture name")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--alphas", default=None, help="comma-separated alpha grid")
    p.add_argument("--out", default=None, help="benchmark rows as CSV")
    args = p.parse_args(argv)

    s = load_scenario(fixture_path(args.scenario) if args.scenario in FIXTURES else args.scenario)
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.alphas:
        overrides["alpha_grid"] = tuple(float(a) for a in args.alphas.split(","))
    result = run_benchmark(benchmark_spec(s, **overrides))

    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(ROW_FIELDS)
            w.writerows(row_values(r) for r in result.rows)

    print(f"{'weight':<10}{'alg':<5}{'alpha':>6}{'dD %':>9}{'dR %':>9}{'-dg %':>9}{'dt %':>9}{'trials':>8}")
    for r in result.rows:
        print(f"{r.weight:<10}{r.algorithm:<5}{r.alpha:>6g}{r.distance_increase:>9.2f}{r.radio_increase:>9.1f}"
              f"{r.combined_decrease:>9.2f}{r.runtime_increase:>9.0f}{r.trials:>8}")
    if result.skipped:
        print(f"skipped trials: {result.skipped}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
