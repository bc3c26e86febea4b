"""Run verification suites with a seed and write a JSON report.

Usage: python3 scripts/run_campaign.py [--suites ...] [--trials N] [--seed S] [--jobs J] [--out report.json]
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from dualorder.verifier import REGISTRY, run_suites


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--suites", nargs="*", default=list(REGISTRY), choices=list(REGISTRY))
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", default=None, help="write the JSON report here")
    args = parser.parse_args(argv)

    report = {"seed": args.seed, "trials": args.trials, "suites": []}
    for name in args.suites:
        start = time.perf_counter()
        (res,) = run_suites([name], args.trials, args.seed, jobs=args.jobs)
        elapsed = time.perf_counter() - start
        print(f"{'PASS' if res.passed else 'FAIL'} {name}: {res.trials} trials, "
              f"{res.skipped} skipped, {len(res.failures)} failures, {elapsed:.1f} s")
        report["suites"].append({**res.as_dict(), "elapsed_s": round(elapsed, 3)})
    report["passed"] = all(s["passed"] for s in report["suites"])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
