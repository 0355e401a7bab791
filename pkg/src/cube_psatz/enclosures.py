"""Certified rational enclosures for the few transcendental quantities needed.

Every enclosure is a pair ``(lo, hi)`` of Fractions with ``lo <= true <= hi``.
Callers that must never under-approximate use ``hi``; callers certifying an
upper bound on something else use ``lo``.
"""

from __future__ import annotations

import math
from fractions import Fraction

WIDTH = Fraction(1, 10**12)

# pi = 3.14159265358979323846...
PI_LO = Fraction(3141592653589, 10**12)
PI_HI = Fraction(3141592653590, 10**12)

# e^5 = 148.41315910257660342...
E5_LO = Fraction(148413159102576, 10**12)
E5_HI = Fraction(148413159102577, 10**12)


def sqrt_enclosure(x: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Enclose sqrt(x) between dyadic rationals of spacing 2**-bits."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("sqrt of a negative number")
    scale = 1 << (2 * bits)
    # floor(sqrt(x * 4^bits)) computed exactly from integer parts
    lo_int = math.isqrt(x.numerator * scale // x.denominator)
    lo = Fraction(lo_int, 1 << bits)
    hi = lo if lo * lo == x else Fraction(lo_int + 1, 1 << bits)
    return lo, hi


def exact_sqrt(x: Fraction) -> Fraction | None:
    """The rational square root of ``x`` if it has one, else None."""
    x = Fraction(x)
    if x < 0:
        return None
    a, b = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def ceil_sqrt(x: Fraction) -> int:
    """Smallest integer r >= 0 with r*r >= x (exact)."""
    x = Fraction(x)
    if x <= 0:
        return 0
    r = math.isqrt(x.numerator // x.denominator)
    while r * r < x:
        r += 1
    return r


def _atanh_enclosure(z: Fraction, tol: Fraction) -> tuple[Fraction, Fraction]:
    # atanh z = sum z^(2j+1)/(2j+1), 0 <= z < 1; all terms positive, so the
    # partial sum is a lower bound and the geometric tail bounds the rest.
    if not 0 <= z < 1:
        raise ValueError("atanh series needs 0 <= z < 1")
    total = Fraction(0)
    z2 = z * z
    power = z
    j = 0
    while True:
        total += power / (2 * j + 1)
        j += 1
        power *= z2
        tail = power / ((2 * j + 1) * (1 - z2))
        if tail <= tol:
            return total, total + tail


def log_enclosure(x, width: Fraction = WIDTH) -> tuple[Fraction, Fraction]:
    """Enclose log(x) for rational x >= 1 to within ``width``."""
    x = Fraction(x)
    if x < 1:
        raise ValueError("log enclosure implemented for x >= 1")
    if x == 1:
        return Fraction(0), Fraction(0)
    k = 0
    while x >= 2:
        x /= 2
        k += 1
    tol = width / (4 * (k + 1))
    l2_lo, l2_hi = _atanh_enclosure(Fraction(1, 3), tol)
    r_lo, r_hi = _atanh_enclosure((x - 1) / (x + 1), tol)
    lo = 2 * (k * l2_lo + r_lo)
    hi = 2 * (k * l2_hi + r_hi)
    return _round_outward(lo, hi, width)


def _round_outward(lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    # snap onto a grid of spacing width/4 to keep denominators small
    step = width / 4
    lo_n = math.floor(lo / step)
    hi_n = math.ceil(hi / step)
    return lo_n * step, hi_n * step


def e5_upper() -> Fraction:
    return E5_HI
