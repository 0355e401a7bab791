"""Exact Chebyshev polynomials and Markov-type inequality checks.

Everything here is exact rational arithmetic except :func:`markov_sup_check`,
which estimates sup-norms by sampling and is a diagnostic only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .enclosures import E5_LO
from .polycore import Polynomial, as_rational

SUP_SAMPLES = 4096


@dataclass(frozen=True)
class ChebyshevPolynomial:
    d: int
    poly: Polynomial  # univariate, integer coefficients

    def __call__(self, x) -> Fraction:
        return self.poly.eval((as_rational(x),))

    def value_float(self, x: float) -> float:
        # exact evaluation at the float's rational value; the monomial basis
        # cancels badly in floating point for large d
        return float(cheb_value(self.d, Fraction(x)))

    def derivative(self, k: int = 1) -> Polynomial:
        return self.poly.derivative(1, k)

    @property
    def leading_coefficient(self) -> Fraction:
        return self.poly.coeff((self.d,))


@lru_cache(maxsize=None)
def chebyshev(d: int) -> ChebyshevPolynomial:
    """T_d from T_{d+1} = 2x T_d - T_{d-1}."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    x = Polynomial.var(1, 1)
    prev, cur = Polynomial.one(1), x
    if d == 0:
        return ChebyshevPolynomial(0, prev)
    for _ in range(d - 1):
        prev, cur = cur, x * cur * 2 - prev
    return ChebyshevPolynomial(d, cur)


def cheb_value(d: int, x) -> Fraction:
    """T_d(x) at a rational point via the three-term recurrence (no expansion)."""
    x = as_rational(x)
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if d == 0:
        return Fraction(1)
    prev, cur = Fraction(1), x
    for _ in range(d - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


@dataclass(frozen=True)
class InequalityCheck:
    """Two sides of ``lhs <= rhs`` plus the verdict."""

    name: str
    lhs: object
    rhs: object
    holds: bool
    certified: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return f"{v.numerator}/{v.denominator}"
            return v

        return {
            "name": self.name,
            "lhs": enc(self.lhs),
            "rhs": enc(self.rhs),
            "holds": self.holds,
            "certified": self.certified,
            "note": self.note,
        }


def cheb_derivative_bound_check(d: int, k: int, x) -> InequalityCheck:
    """|T_d^(k)(x)| <= M(d, k) |T_d(x)| <= d^(2k) |T_d(x)| for x >= 1, evaluated exactly.

    M(d, k) is :func:`markov_coefficient`; both links of the chain must hold.
    """
    x = as_rational(x)
    if d < 1 or k < 0 or x < 1:
        raise ValueError("need d >= 1, k >= 0, x >= 1")
    t = chebyshev(d)
    deriv = t.poly.derivative(1, k) if k else t.poly
    lhs = abs(deriv.eval((x,)))
    tx = abs(t(x))
    mid = markov_coefficient(d, k) * tx
    rhs = Fraction(d) ** (2 * k) * tx
    return InequalityCheck(
        f"markov d={d} k={k} x={x}", lhs, rhs, lhs <= mid <= rhs, note=f"middle bound {mid}"
    )


def markov_coefficient(d: int, k: int) -> Fraction:
    """d^2 (d^2-1^2) ... (d^2-(k-1)^2) / (1*3*...*(2k-1)), which equals T_d^(k)(1)."""
    num = 1
    den = 1
    for j in range(k):
        num *= d * d - j * j
        den *= 2 * j + 1
    return Fraction(num, den)


def lobatto_nodes(count: int = SUP_SAMPLES) -> list[float]:
    """Chebyshev extreme points cos(j pi/(count-1)); includes both endpoints."""
    return [math.cos(j * math.pi / (count - 1)) for j in range(count)]


@dataclass(frozen=True)
class MarkovSupReport:
    degree: int
    sup_p: float
    sup_dp: float
    ratio: float
    holds: bool
    samples: int
    certified: bool = False

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def markov_sup_check(p: Polynomial, d: int, samples: int = SUP_SAMPLES, rtol: float = 1e-9) -> MarkovSupReport:
    """Sampled sup|p'| <= d^2 sup|p| on [-1, 1]. Not certified."""
    if p.n != 1:
        raise ValueError("markov_sup_check takes a univariate polynomial")
    if p.total_degree() > d:
        raise ValueError("polynomial degree exceeds the stated bound")
    dp = p.derivative(1)
    nodes = lobatto_nodes(samples)
    # nodes are floats, but each is evaluated exactly and rounded once
    sup_p = max(abs(float(p.eval((Fraction(x),)))) for x in nodes)
    sup_dp = max(abs(float(dp.eval((Fraction(x),)))) for x in nodes)
    ratio = sup_dp / sup_p if sup_p else (0.0 if sup_dp == 0 else math.inf)
    holds = sup_dp <= d * d * sup_p * (1 + rtol) + rtol
    return MarkovSupReport(d, sup_p, sup_dp, ratio, holds, samples)


def cheb_scaled_value(d: int, delta) -> Fraction:
    """Exact T_d(1/(1-delta)) for 0 < delta < 1."""
    delta = as_rational(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return cheb_value(d, 1 / (1 - delta))


def chebybound_check(d: int, delta) -> InequalityCheck:
    """T_d(1/(1-delta)) <= e^5 for d >= 2, delta <= 1/d^2.

    Compared against a rational *lower* bound of e^5, so a pass certifies
    the inequality against the true constant.
    """
    delta = as_rational(delta)
    if d < 2 or delta > Fraction(1, d * d):
        raise ValueError("check requires d >= 2 and delta <= 1/d^2")
    value = cheb_scaled_value(d, delta)
    return InequalityCheck(f"chebybound d={d} delta={delta}", value, E5_LO, value <= E5_LO)
