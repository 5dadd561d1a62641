#!/usr/bin/env python3
"""Report the structural observations on the first product family:
reversal symmetry of B and C, and non-negativity of A over a grid."""
import argparse
import sys

from borwein_lab.analysis import a_positivity_report, conj1_components, reversal_holds


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-max", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--k-max", type=int, default=10)
    args = ap.parse_args()

    rev_bad = []
    for m in range(args.m_max + 1):
        for n in range(1, args.n_max + 1):
            for k, (_, B, C) in enumerate(conj1_components(m, n, args.k_max)):
                if not reversal_holds(B, C, n):
                    rev_bad.append((m, n, k))
    neg = a_positivity_report(range(1, args.m_max + 1), range(0, args.n_max + 1), args.k_max)
    print(f"reversal failures: {rev_bad or 'none'}")
    print(f"negative coefficients of A: {len(neg)}")
    for row in neg[:20]:
        print("  m=%d n=%d k=%d q^%d: %d" % row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
