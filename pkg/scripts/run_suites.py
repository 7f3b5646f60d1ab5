#!/usr/bin/env python3
"""Run the verification suites and print every check.

    python3 scripts/run_suites.py                # all of them
    python3 scripts/run_suites.py counting sr    # a selection
"""

import argparse
import json

from quandle16p import suites

RUNNERS = {
    "sr": lambda: [suites.sr_structure(p) for p in (7, 13)],
    "lss": lambda: [suites.lss_family(p) for p in (7, 11, 13)],
    "decomposition": lambda: [suites.decomposition(p) for p in (7, 13)],
    "inventory": lambda: [suites.inventory()],
    "counting": lambda: [suites.counting_suite(7)],
    "appendix": lambda: [suites.appendix_suite()],
    "galois": lambda: [suites.galois_suite()],
}


def main() -> int:
    ap = argparse.ArgumentParser(description="Run the verification suites.")
    ap.add_argument("names", nargs="*", metavar="NAME", help=f"any of {', '.join(RUNNERS)} (default: all)")
    args = ap.parse_args()
    unknown = [n for n in args.names if n not in RUNNERS]
    if unknown:
        ap.error(f"unknown suite {unknown[0]!r}")
    ok = True
    for name in args.names or RUNNERS:
        for rep in RUNNERS[name]():
            print(f"== {rep.name} ({rep.seconds:.1f}s)")
            for k, v in rep.checks.items():
                print(f"   {'ok  ' if v else 'FAIL'} {k}")
            details = {k: v for k, v in rep.details.items() if k != "per_quandle"}
            if details:
                print(f"   details {json.dumps(details, default=str)}")
            ok &= rep.ok
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
