"""Command-line front end.

Exit codes: 0 success, 1 configuration or input error, 2 numerical failure
inside a run, 3 verification suite failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import checks, harness
from .errors import ConfigError, DomainError, InvalidInputError, NumericalFailureError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="undergrad",
        description="Adaptive universal first-order methods: benchmark runner and verifier.",
    )
    parser.add_argument("--threads", type=int, default=1, help="worker threads across seeds")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment config or a registry entry")
    p_run.add_argument("--config", required=True, help="path to a JSON config, or a registry name")

    p_verify = sub.add_parser("verify", help="run a named check suite")
    p_verify.add_argument("--suite", required=True, help="suite name; see `undergrad list`")

    p_plot = sub.add_parser("plot", help="export gap curves from result CSVs")
    p_plot.add_argument("--input", required=True, help="glob over result CSV files")
    p_plot.add_argument("--out", required=True, help="output directory")

    sub.add_parser("list", help="list registry entries, algorithms, problems, suites")
    return parser


def _env_base_seed() -> int | None:
    raw = os.environ.get("UNDERGRAD_SEED")
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"UNDERGRAD_SEED must be an integer, got {raw!r}") from exc


def _print_summary(summary: harness.RunSummary) -> None:
    final = summary.mean_gap[-1]
    slope = f"{summary.fit.slope:+.3f}" if summary.fit is not None else "n/a"
    print(
        f"{summary.label}: seeds={len(summary.csv_paths)} "
        f"final_mean_gap={final:.3e} slope={slope} wall_ms={summary.wall_ns_total / 1e6:.1f}"
    )
    print(f"  mean csv: {summary.aggregate_path}")


def _cmd_run(args: argparse.Namespace) -> int:
    base_seed = _env_base_seed()
    if args.config in harness.REGISTRY_NAMES:
        summaries = harness.run_registry(args.config, threads=args.threads, base_seed=base_seed)
        for summary in summaries:
            _print_summary(summary)
        return 0
    config = harness.load_config(args.config)
    if base_seed is not None:
        config = harness.rebase_seeds(config, base_seed)
    _print_summary(harness.run_experiment(config, threads=args.threads))
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    results = checks.run_suite(args.suite)
    for res in results:
        mark = "PASS" if res.passed else "FAIL"
        print(f"[{mark}] {res.name}: {res.detail}")
    if not all(res.passed for res in results):
        print(f"suite {args.suite}: FAILED")
        return 3
    print(f"suite {args.suite}: ok ({len(results)} checks)")
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    for path in harness.plot(args.input, args.out):
        print(path)
    return 0


def _cmd_list() -> int:
    print("registry:")
    for name in harness.REGISTRY_NAMES:
        n = len(harness.registry_configs(name, output_dir="results"))
        print(f"  {name} ({n} configs)")
    print("algorithms:")
    for name in harness.ALGORITHM_NAMES:
        print(f"  {name}")
    print("problems:")
    for name in sorted(harness.PROBLEM_BUILDERS):
        print(f"  {name}")
    print("suites:")
    for name in sorted(checks.SUITES):
        print(f"  {name}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 1
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "plot":
            return _cmd_plot(args)
        return _cmd_list()
    except (ConfigError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NumericalFailureError, DomainError) as exc:
        # a domain violation mid-run means the iteration left the feasible
        # set, which is a numerical breakdown rather than a config problem
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
