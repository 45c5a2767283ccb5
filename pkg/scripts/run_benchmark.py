"""Run one registry benchmark group and export its gap curves."""

import argparse
import os
import sys

from undergrad.harness import REGISTRY_NAMES, plot, run_registry


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("figure", choices=REGISTRY_NAMES, help="registry group to run")
    parser.add_argument("--out", default="results", help="output directory root")
    parser.add_argument("--threads", type=int, default=1, help="worker threads across seeds")
    parser.add_argument("--seed", type=int, default=None, help="rebase every config's seed range")
    args = parser.parse_args()

    out_dir = os.path.join(args.out, args.figure)
    summaries = run_registry(args.figure, output_dir=out_dir, threads=args.threads, base_seed=args.seed)
    for s in summaries:
        slope = f"{s.fit.slope:+.3f}" if s.fit is not None else "  n/a"
        print(f"{s.label:40s} final mean gap {s.mean_gap[-1]:.3e}  slope {slope}")

    plot_dir = os.path.join(out_dir, "plots")
    for path in plot(os.path.join(out_dir, "*__mean.csv"), plot_dir):
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
