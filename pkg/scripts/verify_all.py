"""Run every check suite and report a one-line verdict per check."""

import sys

from undergrad.checks import SUITES, run_suite


def main():
    failed = 0
    for suite in SUITES:
        print(f"== {suite} ==")
        for res in run_suite(suite):
            mark = "PASS" if res.passed else "FAIL"
            print(f"[{mark}] {res.name}: {res.detail}")
            failed += 0 if res.passed else 1
    print(f"{failed} failing checks" if failed else "all checks passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
