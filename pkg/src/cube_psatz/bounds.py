"""Effective degree bounds for hypercube certificates and lower-bound diagnostics.

All returned integers are computed from certified rational upper enclosures
of log, pi and square roots, so they always satisfy the real inequality they
stand for (possibly exceeding the true minimum when a value sits within
1e-12 of an integer).
"""

from __future__ import annotations

import logging
import math
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .certificates import GeneratorSet, QModCertificate, SosExpression, verify_qmod
from .chebyshev import InequalityCheck, cheb_value
from .enclosures import E5_HI, PI_HI, PI_LO, ceil_sqrt, exact_sqrt, log_enclosure, sqrt_enclosure
from .polycore import Polynomial, as_rational, format_rational

log = logging.getLogger(__name__)

#: Default for the constant c: a rational upper bound of e^5.
C_FRAK_DEFAULT = E5_HI


class ConstantWarning(UserWarning):
    pass


@dataclass(frozen=True)
class BoundInputs:
    n: int
    d: int
    fmin: Fraction
    fmax: Fraction
    c_frak: Fraction = C_FRAK_DEFAULT
    C_nd: Fraction | None = None
    illustrative: bool = False
    extrema_estimated: bool = False

    def __post_init__(self):
        for name in ("fmin", "fmax", "c_frak"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.C_nd is not None:
            object.__setattr__(self, "C_nd", as_rational(self.C_nd))
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        if self.fmin <= 0:
            raise ValueError("fmin must be positive")
        if self.fmax < self.fmin:
            raise ValueError("fmax must be >= fmin")
        if self.c_frak < 1:
            raise ValueError("the constant c must be >= 1")
        if self.C_nd is not None and self.C_nd <= 0:
            raise ValueError("C(n,d) must be positive")
        if self.c_frak < C_FRAK_DEFAULT:
            warnings.warn(
                f"c = {self.c_frak} is below the proven e^5 bound; the Putinar degree guarantee is not covered",
                ConstantWarning,
                stacklevel=3,
            )

    @property
    def ratio(self) -> Fraction:
        return self.fmax / self.fmin

    def schmudgen_constant(self) -> Fraction:
        if self.C_nd is not None:
            return self.C_nd
        if self.illustrative:
            return Fraction(1)
        raise ValueError("C(n,d) is required (or pass illustrative=True to use the placeholder 1)")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "fmin": format_rational(self.fmin),
            "fmax": format_rational(self.fmax),
            "c_frak": format_rational(self.c_frak),
            "C_nd": None if self.C_nd is None else format_rational(self.C_nd),
            "illustrative": self.illustrative and self.C_nd is None,
            "extrema_estimated": self.extrema_estimated,
        }


@dataclass
class BoundReport:
    name: str
    inputs: dict
    result: object
    addend_breakdown: dict = field(default_factory=dict)
    enclosures: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return format_rational(v)
            if isinstance(v, tuple):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            return v

        return {
            "bound": self.name,
            "inputs": self.inputs,
            "certified_enclosures_used": enc(self.enclosures),
            "result": enc(self.result),
            "addend_breakdown": enc(self.addend_breakdown),
            "notes": self.notes,
        }


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _sqrt_hi(x: Fraction) -> Fraction:
    return sqrt_enclosure(x)[1]


# ---------------------------------------------------------------------------
# upper-bound formulas


def epsilon_bound(inputs: BoundInputs) -> Fraction:
    """fmin / (2 c d^2 fmax), exactly."""
    return inputs.fmin / (2 * inputs.c_frak * inputs.d ** 2 * inputs.fmax)


def _q_term_hi(inputs: BoundInputs) -> tuple[Fraction, tuple]:
    # upper bound of 4 c d^2 log(n) fmax/fmin
    enc = log_enclosure(inputs.n)
    return 4 * inputs.c_frak * inputs.d ** 2 * enc[1] * inputs.ratio, enc


def choose_q(inputs: BoundInputs) -> int:
    """Smallest q >= 1 with 2q >= 4 c log(n) d^2 fmax/fmin (certified)."""
    term, _ = _q_term_hi(inputs)
    return max(1, _ceil(term / 2))


def _pi_branch_hi(d: int, n: int) -> Fraction:
    # upper bound of pi d sqrt(2n)
    return _sqrt_hi(PI_HI ** 2 * d * d * 2 * n)


def schmudgen_degree(inputs: BoundInputs) -> int:
    """Smallest integer r >= max{sqrt(C fmax/fmin), pi d sqrt(2n)} (certified)."""
    C = inputs.schmudgen_constant()
    r_c = ceil_sqrt(C * inputs.ratio)
    r_pi = ceil_sqrt(PI_HI ** 2 * inputs.d ** 2 * 2 * inputs.n)
    return max(r_c, r_pi)


def putinar_addends(inputs: BoundInputs) -> dict:
    """Certified upper bounds of the two addends of the Putinar degree formula."""
    C = inputs.schmudgen_constant()
    q_term, log_enc = _q_term_hi(inputs)
    pi_branch = _pi_branch_hi(inputs.d, inputs.n)
    c_branch = _sqrt_hi(2 * inputs.c_frak * inputs.ratio * C)
    return {
        "q_term": q_term,
        "pi_branch": pi_branch,
        "schmudgen_branch": c_branch,
        "max_term": max(pi_branch, c_branch),
        "log_n": log_enc,
    }


def putinar_degree(inputs: BoundInputs) -> int:
    """Smallest integer r dominating 4 c d^2 log(n) R + max{pi d sqrt(2n), sqrt(2 c R C)}.

    R = fmax/fmin. The resulting certificate lives in Q(cube)_{r n}.
    """
    add = putinar_addends(inputs)
    return _ceil(add["q_term"] + add["max_term"])


def epsilon_report(inputs: BoundInputs) -> BoundReport:
    eps = epsilon_bound(inputs)
    return BoundReport("epsilon", inputs.to_dict(), eps, {"epsilon": eps, "float": float(eps)})


def choose_q_report(inputs: BoundInputs) -> BoundReport:
    term, enc = _q_term_hi(inputs)
    q = choose_q(inputs)
    return BoundReport("q", inputs.to_dict(), q, {"required_2q_upper": term}, {"log_n": enc})


def schmudgen_report(inputs: BoundInputs) -> BoundReport:
    r = schmudgen_degree(inputs)
    C = inputs.schmudgen_constant()
    notes = ["C(n,d)=1 is an illustrative placeholder"] if inputs.C_nd is None else []
    return BoundReport(
        "schmudgen",
        inputs.to_dict(),
        r,
        {
            "schmudgen_branch_squared": C * inputs.ratio,
            "pi_branch_upper": _pi_branch_hi(inputs.d, inputs.n),
            "certificate_degree": (r + 1) * inputs.n,
        },
        {"pi": (PI_LO, PI_HI)},
        notes,
    )


def putinar_report(inputs: BoundInputs) -> BoundReport:
    add = putinar_addends(inputs)
    r = putinar_degree(inputs)
    notes = ["C(n,d)=1 is an illustrative placeholder"] if inputs.C_nd is None else []
    if inputs.c_frak < C_FRAK_DEFAULT:
        notes.append("c below the proven e^5 bound: guarantee not covered")
    return BoundReport(
        "putinar",
        inputs.to_dict(),
        r,
        {
            "q_term_upper": add["q_term"],
            "max_term_upper": add["max_term"],
            "pi_branch_upper": add["pi_branch"],
            "schmudgen_branch_upper": add["schmudgen_branch"],
            "certificate_degree": r * inputs.n,
        },
        {"log_n": add["log_n"], "pi": (PI_LO, PI_HI), "c_frak": inputs.c_frak},
        notes,
    )


def estimate_extrema(f: Polynomial, samples: int = 4096, seed: int = 0) -> tuple[Fraction, Fraction]:
    """Sampled (min, max) of f on the cube. Not certified."""
    rng = random.Random(seed)
    n = f.n
    corners = [tuple((-1) ** ((k >> j) & 1) for j in range(n)) for k in range(min(2 ** n, samples))]
    pts = corners + [tuple(rng.uniform(-1, 1) for _ in range(n)) for _ in range(samples)]
    vals = [f.eval_float(p) for p in pts]
    return Fraction(min(vals)).limit_denominator(10**12), Fraction(max(vals)).limit_denominator(10**12)


# ---------------------------------------------------------------------------
# lower bound


def _sqrt_upper_below_one(eps: Fraction) -> tuple[Fraction, bool]:
    root = exact_sqrt(eps)
    if root is not None:
        return root, True
    hi = sqrt_enclosure(eps)[1]
    if hi >= 1:
        raise ValueError("epsilon too close to 1 for a certified scan")
    return hi, False


def negativfinal_sides(r: int, s: Fraction) -> tuple[Fraction, Fraction]:
    """(1/(3 s), r^2/2 + r^4 T_r(1/(1-s))^2) for s = sqrt(eps)."""
    lhs = 1 / (3 * s)
    t = cheb_value(r, 1 / (1 - s))
    rhs = Fraction(r * r, 2) + r ** 4 * t * t
    return lhs, rhs


def lower_bound_excluded_degree(epsilon, max_r: int = 100000) -> int:
    """Largest r0 such that the final lower-bound inequality fails for every r <= r0.

    No certificate of (1-x^2)(1-y^2) + eps in Q(cube^2)_r exists for r <= r0.
    When sqrt(eps) is irrational an upper enclosure s >= sqrt(eps) is used:
    the left side only shrinks and the right side only grows, so a failure
    observed with s is a failure for the true value.
    """
    eps = as_rational(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    s, _ = _sqrt_upper_below_one(eps)
    r = 1
    while r <= max_r:
        lhs, rhs = negativfinal_sides(r, s)
        if lhs <= rhs:
            return r - 1
        r += 1
    raise RuntimeError(f"inequality still failing at r = {max_r}")


@dataclass
class LowerBoundReport:
    epsilon: Fraction
    excluded_degree: int | None
    delta: Fraction | None = None
    r: int | None = None
    facts: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(f.holds for f in self.facts)

    def to_dict(self) -> dict:
        return {
            "epsilon": format_rational(self.epsilon),
            "excluded_degree": self.excluded_degree,
            "delta": None if self.delta is None else format_rational(self.delta),
            "r": self.r,
            "facts": [f.to_dict() for f in self.facts],
            "all_facts_pass": self.passed,
            "notes": self.notes,
        }


def lower_bound_report(epsilon) -> LowerBoundReport:
    eps = as_rational(epsilon)
    r0 = lower_bound_excluded_degree(eps)
    return LowerBoundReport(eps, r0)


def lower_bound_target(epsilon, n: int = 2) -> Polynomial:
    x1, x2 = Polynomial.var(1, n), Polynomial.var(2, n)
    return (1 - x1 ** 2) * (1 - x2 ** 2) + as_rational(epsilon)


def fact_diagnostics(
    cert: QModCertificate,
    epsilon,
    delta=None,
    samples: int = 4096,
    seed: int = 0,
    grid: int = 64,
) -> LowerBoundReport:
    """Evaluate the four local facts around (1, 1) on a concrete certificate.

    The corner value, slope and curvature checks are exact. The sup-norm
    check samples sigma_1 on the box x^2, y^2 <= 1/(1 - delta) and is not
    certified.
    """
    eps = as_rational(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if cert.gens != GeneratorSet.cube(2):
        raise ValueError("fact diagnostics need a certificate over the square [-1,1]^2")
    report = verify_qmod(cert, lower_bound_target(eps))
    if not report.passed:
        raise ValueError(f"certificate does not verify: {report.violations}")
    notes = []
    if delta is None:
        root = exact_sqrt(eps)
        if root is not None and root < 1:
            delta = root
        elif eps >= 1:
            delta = Fraction(1, 2)
            notes.append("epsilon >= 1: no delta in [epsilon, 1) exists; delta=1/2 used, facts checked as stated inequalities")
        else:
            raise ValueError("epsilon is not a rational square; supply delta with epsilon <= delta < 1")
    delta = as_rational(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if eps < 1 and delta < eps:
        raise ValueError("delta must satisfy delta >= epsilon")

    r = cert.r
    sigma1 = cert.sigma[1].expand()
    t_val = cheb_value(r, 1 / (1 - delta))
    facts = []

    # value at the corner: sigma_1(1,1) <= eps r^2 / 2
    lhs1 = sigma1.eval((1, 1))
    rhs1 = eps * r * r / 2
    facts.append(InequalityCheck("sigma1(1,1) <= eps r^2 / 2", lhs1, rhs1, lhs1 <= rhs1))

    # sup-norm on the enlarged box: sampled max of sigma_1 on the enlarged box <= 2 T_r(1/(1-delta))
    half = math.sqrt(float(1 / (1 - delta)))
    rng = random.Random(seed)
    pts = [(sx * half, sy * half) for sx in (-1, 1) for sy in (-1, 1)] + [(0.0, 0.0), (1.0, 1.0)]
    pts += [(rng.uniform(-half, half), rng.uniform(-half, half)) for _ in range(samples)]
    lhs2 = max(sigma1.eval_float(p) for p in pts)
    rhs2 = 2 * t_val
    facts.append(
        InequalityCheck(
            "max sigma1 on box <= 2 T_r(1/(1-delta))",
            lhs2,
            rhs2,
            lhs2 <= float(rhs2) * (1 + 1e-12),
            certified=False,
            note=f"{len(pts)} samples, seed {seed}",
        )
    )

    # g(t) = sigma_1(1 + t, 1 - t), exact univariate
    t = Polynomial.var(1, 1)
    g = sigma1.compose([1 + t, 1 - t])
    g1 = g.derivative(1, 1)
    g2 = g.derivative(1, 2)

    # curvature along the anti-diagonal: |g''(u)|/2 <= r^4 T^2 on a grid of u in [-delta, delta]
    us = [-delta + 2 * delta * Fraction(j, grid) for j in range(grid + 1)]
    lhs3 = max(abs(g2.eval((u,))) for u in us) / 2
    rhs3 = Fraction(r) ** 4 * t_val * t_val
    facts.append(
        InequalityCheck(
            "|g''(u)|/2 <= r^4 T_r(1/(1-delta))^2",
            lhs3,
            rhs3,
            lhs3 <= rhs3,
            note=f"exact on a {grid + 1}-point grid",
        )
    )

    # slope at the corner: g'(0) <= eps r^2/(2 delta) + delta r^4 T^2
    lhs4 = g1.eval((0,))
    rhs4 = eps * r * r / (2 * delta) + delta * Fraction(r) ** 4 * t_val * t_val
    facts.append(InequalityCheck("g'(0) <= eps r^2/(2 delta) + delta r^4 T^2", lhs4, rhs4, lhs4 <= rhs4))

    r0 = lower_bound_excluded_degree(eps) if eps < 1 else None
    if r0 is not None and r <= r0:
        notes.append(f"certificate degree {r} <= excluded degree {r0}: inconsistent")
    return LowerBoundReport(eps, r0, delta, r, facts, notes)


def epsilon_one_certificate() -> QModCertificate:
    """(1-x1^2)(1-x2^2) + 1 = (x1 x2)^2 + (1 - x1^2) + (1 - x2^2)."""
    x1, x2 = Polynomial.var(1, 2), Polynomial.var(2, 2)
    return QModCertificate(
        GeneratorSet.cube(2),
        (SosExpression.of([x1 * x2]), SosExpression.of([Polynomial.one(2)]), SosExpression.of([Polynomial.one(2)])),
        4,
    )
