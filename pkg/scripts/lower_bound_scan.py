"""Scan the excluded degree r0(eps) over eps = 4^-k and print the trend r0 * eps^(1/8)."""

import argparse
from fractions import Fraction

from cube_psatz.bounds import lower_bound_excluded_degree


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=16)
    args = ap.parse_args()
    print(f"{'k':>3} {'eps':>14} {'r0':>4} {'r0*eps^1/8':>11} {'(r0+1)*eps^1/8':>15}")
    for k in range(1, args.kmax + 1):
        eps = Fraction(1, 4 ** k)
        r0 = lower_bound_excluded_degree(eps)
        scale = float(eps) ** 0.125
        print(f"{k:>3} {str(eps):>14} {r0:>4} {r0 * scale:>11.4f} {(r0 + 1) * scale:>15.4f}")


if __name__ == "__main__":
    main()
