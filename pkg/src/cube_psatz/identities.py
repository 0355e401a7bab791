"""Explicit certificate identities for degree shifts on the hypercube.

The univariate building block is

    1 - x^2 = f_q(x) + (1 - x^{2q}) / q,
    f_q(x)  = sum_{i=1}^{q-1} (q - i)/q * x^{2(i-1)} * (1 - x^2)^2,

which puts 1 - x^2 in the degree-2q quadratic module of 1 - x^{2q}.
Rescaling x -> x/eta and splitting off sum_{j != i} x_j^{2q} carries it to
the L^{2q} ball, and 1 - x^{2q} = (1 - x^2)(1 + x^2 + ... + x^{2q-2})
carries the ball back to the cube.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .certificates import GeneratorSet, QModCertificate, SosExpression, resolve_eta
from .polycore import Polynomial


@dataclass(frozen=True)
class ShiftParams:
    """Scaled-cube half-width ``eta`` and ball exponent ``q`` for ``n`` variables.

    Requires eta^{2q} >= n, which lets eta stay rational: the slack
    eta^{2q} - n enters the certificates as a nonnegative constant. Only
    eta^2 enters any identity, so ``eta2`` may be given instead of ``eta``
    when eta itself is irrational (``eta`` is then None).
    """

    n: int
    q: int
    eta: Fraction | None = None
    eta2: Fraction | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.q < 1:
            raise ValueError("q must be >= 1")
        eta, eta2 = resolve_eta(self.eta, self.eta2)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "eta2", eta2)
        if self.eta2q < self.n:
            raise ValueError(f"eta^(2q) = {self.eta2q} < n = {self.n}")

    @property
    def eta2q(self) -> Fraction:
        return self.eta2 ** self.q

    @property
    def shift(self) -> int:
        return 2 * self.q - 2

    @classmethod
    def auto(cls, n: int, q: int) -> "ShiftParams":
        return cls(n, q, select_eta(n, q))

    def generators(self) -> GeneratorSet:
        return GeneratorSet.scaled_cube(self.n, self.eta, eta2=self.eta2)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator in the closed interval [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    fl = math.floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    return fl + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl))


def _iroot(a: int, k: int) -> int:
    """floor(a ** (1/k)) for integers a >= 0."""
    if a < 2:
        return a
    x = 1 << -(-a.bit_length() // k)
    while True:
        y = ((k - 1) * x + a // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > a:
        x -= 1
    while (x + 1) ** k <= a:
        x += 1
    return x


def select_eta(n: int, q: int, slack_bits: int = 20) -> Fraction:
    """Smallest-denominator rational eta in [n^(1/2q), n^(1/2q) + 2^-slack_bits].

    The lower end is replaced by a dyadic upper bound of the root that is
    2^-40 tight, so eta^(2q) >= n holds by construction.
    """
    k = 2 * q
    prec = 40 + slack_bits
    scale = 1 << prec
    lower_int = _iroot(n * scale ** k, k)
    lower = Fraction(lower_int, scale)
    if lower ** k == n:
        upper_root = lower
    else:
        upper_root = Fraction(lower_int + 1, scale)
    hi = lower + Fraction(1, 1 << slack_bits)
    eta = simplest_between(upper_root, hi)
    assert eta ** k >= n
    return eta


# ---------------------------------------------------------------------------
# univariate identities


def fq_summands(q: int):
    """(weight, polynomial) pairs of f_q in one variable."""
    x = Polynomial.var(1, 1)
    base = 1 - x * x
    return [(Fraction(q - i, q), x ** (i - 1) * base) for i in range(1, q)]


def build_fq(q: int) -> SosExpression:
    """f_q = ((q-1) - q x^2 + x^{2q}) / q as an explicit weighted SOS."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return SosExpression(1, tuple(fq_summands(q)))


def fq_closed_form(q: int) -> Polynomial:
    x = Polynomial.var(1, 1)
    return ((q - 1) - q * x * x + x ** (2 * q)).scale(Fraction(1, q))


def cert_univariate_shift(q: int) -> QModCertificate:
    """1 - x^2 in Q(1 - x^{2q})_{2q}."""
    if q < 1:
        raise ValueError("q must be >= 1")
    gens = GeneratorSet.lnorm_ball(1, q)
    return QModCertificate(gens, (build_fq(q), SosExpression.constant(Fraction(1, q), 1)), 2 * q)


def cert_pow2_recurrence(m: int) -> QModCertificate:
    """1 - x^2 = sum_{i<m} 2^-i (1 - x^{2^i})^2 + 2^{1-m} (1 - x^{2^m})."""
    if m < 1:
        raise ValueError("m must be >= 1")
    x = Polynomial.var(1, 1)
    sigma0 = SosExpression(1, tuple((Fraction(1, 2 ** i), 1 - x ** (2 ** i)) for i in range(1, m)))
    sigma1 = SosExpression.constant(Fraction(1, 2 ** (m - 1)), 1)
    gens = GeneratorSet.lnorm_ball(1, 2 ** (m - 1))
    return QModCertificate(gens, (sigma0, sigma1), 2 ** m)


# ---------------------------------------------------------------------------
# multivariate identities


def cert_box_in_lnorm(params: ShiftParams, i: int) -> QModCertificate:
    """eta^2 - x_i^2 in Q(n - ||x||_{2q}^{2q})_{2q}."""
    n, q, e2 = params.n, params.q, params.eta2
    if not 1 <= i <= n:
        raise IndexError(f"variable index {i} out of range for n={n}")
    lam = e2 / (q * params.eta2q)  # multiplier of eta^{2q} - x_i^{2q}
    xi = Polynomial.var(i, n)
    pairs = []
    # eta^2 (x^{k-1}(1 - x^2))^2 at x = x_i/eta, kept rational in eta^2
    for k in range(1, q):
        w = Fraction(q - k, q)
        pairs.append((w * e2 / e2 ** (k - 1), xi ** (k - 1) - xi ** (k + 1) * (1 / e2)))
    for j in range(1, n + 1):
        if j != i:
            pairs.append((lam, Polynomial.var(j, n) ** q))
    slack = params.eta2q - n
    if slack:
        pairs.append((lam * slack, Polynomial.one(n)))
    gens = GeneratorSet.lnorm_ball(n, q)
    return QModCertificate(gens, (SosExpression(n, tuple(pairs)), SosExpression.constant(lam, n)), 2 * q)


def cert_lnorm_in_cube(n: int, q: int) -> QModCertificate:
    """n - ||x||_{2q}^{2q} = sum_i (1 - x_i^2)(1 + x_i^2 + ... + x_i^{2q-2})."""
    if n < 1 or q < 1:
        raise ValueError("need n >= 1 and q >= 1")
    sigma = [SosExpression.empty(n)]
    for i in range(1, n + 1):
        xi = Polynomial.var(i, n)
        sigma.append(SosExpression(n, tuple((Fraction(1), xi ** k) for k in range(q))))
    return QModCertificate(GeneratorSet.cube(n), tuple(sigma), 2 * q)


def box_target(params: ShiftParams, i: int) -> Polynomial:
    return params.eta2 - Polynomial.var(i, params.n) ** 2


def lnorm_target(n: int, q: int) -> Polynomial:
    return GeneratorSet.lnorm_ball(n, q).generators[0]


def one_minus_x2() -> Polynomial:
    return 1 - Polynomial.var(1, 1) ** 2


CONSTRUCTORS = ("fq", "univariate-shift", "pow2", "box-in-lnorm", "lnorm-in-cube")
