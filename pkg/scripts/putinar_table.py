"""Tabulate certified Putinar and Schmudgen degree bounds over a small (n, d, ratio) grid."""

import argparse
import warnings
from fractions import Fraction

from cube_psatz.bounds import BoundInputs, choose_q, putinar_addends, putinar_degree, schmudgen_degree


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--C", type=Fraction, default=None, help="Schmudgen constant; omit for the illustrative placeholder 1")
    ap.add_argument("--c", type=Fraction, default=None, help="the constant c (default: e^5 upper bound)")
    args = ap.parse_args()
    warnings.simplefilter("ignore")
    kw = {} if args.c is None else {"c_frak": args.c}
    print(f"{'n':>2} {'d':>2} {'ratio':>5} {'q':>8} {'schmudgen':>9} {'q-term':>12} {'max-term':>9} {'putinar':>10}")
    for n in (1, 2, 3, 5):
        for d in (2, 4, 8):
            for ratio in (1, 2, 10):
                inp = BoundInputs(n, d, Fraction(1), Fraction(ratio), C_nd=args.C, illustrative=args.C is None, **kw)
                add = putinar_addends(inp)
                print(
                    f"{n:>2} {d:>2} {ratio:>5} {choose_q(inp):>8} {schmudgen_degree(inp):>9} "
                    f"{float(add['q_term']):>12.1f} {float(add['max_term']):>9.2f} {putinar_degree(inp):>10}"
                )


if __name__ == "__main__":
    main()
