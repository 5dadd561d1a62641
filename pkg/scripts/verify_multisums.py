#!/usr/bin/env python3
"""Check the multisum identities over parameter grids, exactly and modulo a prime.

    python scripts/verify_multisums.py --exact-m 2 --exact-n 5 --mod-m 3 --mod-n 8
"""
import argparse
import json
import sys
import time

from borwein_lab.identity import verify_general, verify_kaneko, verify_theorem


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--exact-m", type=int, default=2)
    ap.add_argument("--exact-n", type=int, default=4)
    ap.add_argument("--mod-m", type=int, default=3)
    ap.add_argument("--mod-n", type=int, default=6)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--general", default="1:2:2,2:3:3", help="m:a:K triples for the residue-a variant")
    args = ap.parse_args()

    reports = []
    for m in range(args.exact_m + 1):
        for n in range(args.exact_n + 1):
            reports.append(verify_theorem(m, n, "exact"))
    for m in range(args.mod_m + 1):
        for n in range(args.mod_n + 1):
            reports.append(verify_theorem(m, n, "modular", args.trials, seed=args.seed))
    for nv in range(1, 4):
        for N in range(4):
            reports.append(verify_kaneko(nv, N, "exact"))
    for item in args.general.split(","):
        m, a, K = map(int, item.split(":"))
        for n in range(4):
            reports.append(verify_general(m, n, a, K, "exact"))
    failed = 0
    for r in reports:
        failed += not r.passed
        print(json.dumps(r.to_json()))
    print(f"{len(reports) - failed}/{len(reports)} passed", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    t0 = time.perf_counter()
    code = main()
    print(f"{time.perf_counter() - t0:.1f}s", file=sys.stderr)
    sys.exit(code)
