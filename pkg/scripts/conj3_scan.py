#!/usr/bin/env python3
"""Scan the general-K product on a grid and list every (K, m1, m2, n, k) cell
whose p^k slice breaks the residue sign pattern.

    python scripts/conj3_scan.py                       # m1,m2 in {2,3}, n<=5, k<=10, K=2..6
    python scripts/conj3_scan.py --n 6..12 --K 2       # the same cells at larger n
    python scripts/conj3_scan.py --unequal --n 3..6    # n1, n2, n3 varied independently
"""
import argparse
import itertools
import sys

from borwein_lab.analysis import check_pattern
from borwein_lab.cli import parse_range
from borwein_lab.qseries import conj3_spec, expand


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--K", default="2..6")
    ap.add_argument("--m1", default="2,3")
    ap.add_argument("--m2", default="2,3")
    ap.add_argument("--n", default="1..5")
    ap.add_argument("--kmax", type=int, default=10)
    ap.add_argument("--unequal", action="store_true", help="let n1, n2, n3 range independently")
    args = ap.parse_args()

    ns = parse_range(args.n)
    triples = itertools.product(ns, ns, ns) if args.unequal else ((n, n, n) for n in ns)
    triples = list(triples)
    bad = 0
    for K in parse_range(args.K):
        for m1 in parse_range(args.m1):
            for m2 in parse_range(args.m2):
                for n1, n2, n3 in triples:
                    s = expand(conj3_spec(m1, m2, n1, n2, n3, K), args.kmax)
                    for k in range(args.kmax + 1):
                        v = check_pattern(s[k], K, k)
                        if v:
                            bad += 1
                            worst = ", ".join(f"q^{x.M}:{x.coeff}" for x in v[:4])
                            print(f"K={K} m1={m1} m2={m2} n=({n1},{n2},{n3}) k={k}: {len(v)} [{worst}]")
    print(f"{bad} failing cells", file=sys.stderr)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
