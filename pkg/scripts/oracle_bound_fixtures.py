"""Independent high-precision evaluation of the degree-bound formulas.

Uses mpmath at 50 digits and does not import the package. The printed
table is frozen into tests/test_bounds.py as pinned fixtures.
"""

import mpmath as mp

mp.mp.dps = 50

C_FRAK = mp.mpf(148413159102577) / 10**12

# (n, d, fmin, fmax, C)
TUPLES = [
    (1, 3, (1, 1), (1, 1), 1),
    (2, 2, (1, 1), (2, 1), 1),
    (2, 4, (1, 2), (3, 1), 10),
    (3, 2, (1, 10), (1, 1), 100),
    (3, 6, (2, 3), (5, 2), 1),
    (4, 3, (1, 1), (7, 1), 1000),
    (5, 2, (1, 100), (1, 1), 1),
    (2, 10, (3, 1), (4, 1), 50),
    (6, 4, (1, 4), (9, 4), 7),
    (10, 8, (1, 1000), (1, 1), 123456),
]


def frac(t):
    return mp.mpf(t[0]) / t[1]


def main():
    rows = []
    for n, d, fmin, fmax, C in TUPLES:
        lo, hi = frac(fmin), frac(fmax)
        R = hi / lo
        eps = lo / (2 * C_FRAK * d * d * hi)
        q_term = 4 * C_FRAK * mp.log(n) * d * d * R
        q = max(1, int(mp.ceil(q_term / 2)))
        pi_branch = mp.pi * d * mp.sqrt(2 * n)
        schm = int(mp.ceil(max(mp.sqrt(C * R), pi_branch)))
        put = int(mp.ceil(q_term + max(pi_branch, mp.sqrt(2 * C_FRAK * R * C))))
        # distance to the nearest integer flags fragile ceilings
        margin = min(abs(v - mp.nint(v)) for v in (q_term / 2, pi_branch, mp.sqrt(C * R), q_term + max(pi_branch, mp.sqrt(2 * C_FRAK * R * C))))
        rows.append((n, d, fmin, fmax, C, mp.nstr(eps, 30), q, schm, put, mp.nstr(margin, 5)))
    for row in rows:
        print(row)


if __name__ == "__main__":
    main()
