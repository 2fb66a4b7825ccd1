"""Convergence time versus vehicle count on a mapping scenario.

    python3 scripts/mapping_sweep.py sec71_mapping --max-av 4 --seeds 5 --out sweep.csv
"""

import argparse
import csv
import dataclasses
import sys

import numpy as np

from coopnav.mapping import error_metrics, run_mapping
from coopnav.scenario import FIXTURES, fixture_path, load_scenario


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("scenario", help="scenario file or fixture name")
    p.add_argument("--max-av", type=int, default=4)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--out", default=None, help="per-run CSV (stdout summary only if omitted)")
    args = p.parse_args(argv)

    s = load_scenario(fixture_path(args.scenario) if args.scenario in FIXTURES else args.scenario)
    truth = s.truth()
    runs = []
    for k in range(1, args.max_av + 1):
        for seed in range(args.seeds):
            params = dataclasses.replace(s.mapping, n_av=k, seed=seed)
            trace = run_mapping(truth, params, s.sensor, s.starts(k))
            p_e = error_metrics(trace.final_map, truth)[2]
            runs.append((k, seed, trace.convergence_time, trace.end_time, trace.coverage_series[-1][1], p_e))

    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n_av", "seed", "convergence_time", "end_time", "coverage", "p_e"])
            w.writerows(runs)

    base = None
    print("n_av  mean_T_eps  ratio_to_1  max_p_e")
    for k in range(1, args.max_av + 1):
        sel = [r for r in runs if r[0] == k]
        t = float(np.mean([r[2] if r[2] is not None else np.inf for r in sel]))
        base = t if base is None else base
        print(f"{k:>4}  {t:10.2f}  {t / base:10.3f}  {max(r[5] for r in sel):7.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
