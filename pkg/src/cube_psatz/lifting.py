"""Constructive degree shifts and the preordering -> quadratic-module lift.

Pipeline for a preorder certificate over the scaled cube [-eta, eta]^n::

    T(eta^2 - x_i^2)_k  --(box-in-ball certs, product expansion)-->
    Q(n - ||x||_{2q}^{2q})_{k + n(2q-2)}  --(ball-in-cube certs)-->
    Q(1 - x_i^2)_{k + n(2q-2)}

Each stage is checked for exact expansion preservation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .certificates import (
    GeneratorSet,
    PreorderCertificate,
    QModCertificate,
    SosExpression,
    verify_preorder,
    verify_qmod,
)
from .identities import ShiftParams, cert_box_in_lnorm, cert_lnorm_in_cube
from .polycore import NEG_INF, Polynomial

log = logging.getLogger(__name__)


class LiftingError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


@dataclass(frozen=True)
class QModElement:
    """sigma[0] + sum_i sigma[i] * g_i without a claimed target or degree."""

    gens: GeneratorSet
    sigma: tuple

    def __post_init__(self):
        sigma = tuple(self.sigma)
        if len(sigma) != self.gens.m + 1:
            raise ValueError(f"need {self.gens.m + 1} multipliers, got {len(sigma)}")
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def from_certificate(cls, cert: QModCertificate) -> "QModElement":
        return cls(cert.gens, cert.sigma)

    @classmethod
    def identity(cls, gens: GeneratorSet) -> "QModElement":
        n = gens.n
        return cls(gens, (SosExpression.constant(1, n),) + tuple(SosExpression.empty(n) for _ in range(gens.m)))

    def expand(self) -> Polynomial:
        total = Polynomial.zero(self.gens.n)
        for i, s in enumerate(self.sigma):
            if s.terms:
                total = total + s.expand() * self.gens.generator(i)
        return total

    def degree(self):
        return max(s.degree() + self.gens.generator(i).total_degree() for i, s in enumerate(self.sigma))

    def merged(self) -> "QModElement":
        return QModElement(self.gens, tuple(s.merged() for s in self.sigma))

    def to_certificate(self, r: int) -> QModCertificate:
        return QModCertificate(self.gens, self.sigma, r)

    def summand_count(self) -> int:
        return sum(len(s) for s in self.sigma)


def _require_singleton(gens: GeneratorSet):
    if gens.m != 1:
        raise ValueError(f"expected a single generator, got {gens.m}")


def qmod_multiply(a: QModElement, b: QModElement) -> QModElement:
    """(s0 + s1 g)(t0 + t1 g) = (s0 t0 + g^2 s1 t1) + (s0 t1 + s1 t0) g."""
    _require_singleton(a.gens)
    if a.gens != b.gens:
        raise ValueError("factors use different generators")
    g = a.gens.generators[0]
    s0, s1 = a.sigma
    t0, t1 = b.sigma
    sigma0 = s0 * t0 + (s1 * t1).times_square(g)
    sigma1 = s0 * t1 + s1 * t0
    return QModElement(a.gens, (sigma0.merged(), sigma1.merged()))


def shift_qmod(element: QModElement, certs: Sequence[QModCertificate], check: bool = True) -> QModElement:
    """Rewrite an element of Q(h) over g, given h_k in Q(g) for every k."""
    h = element.gens
    if len(certs) != h.m:
        raise ValueError(f"need {h.m} generator certificates, got {len(certs)}")
    if not certs:
        raise ValueError("no generator certificates supplied")
    g = certs[0].gens
    for k, cert in enumerate(certs, start=1):
        if cert.gens != g:
            raise ValueError("generator certificates disagree on the target generators")
        if check:
            report = verify_qmod(cert, h.generator(k))
            if not report.passed:
                raise ValueError(f"certificate for h_{k} fails: {report.violations}")
    n = g.n
    out = [SosExpression.empty(n) for _ in range(g.m + 1)]
    out[0] = element.sigma[0]
    for k, cert in enumerate(certs, start=1):
        bar = element.sigma[k]
        if not bar.terms:
            continue
        for j, s in enumerate(cert.sigma):
            if s.terms:
                out[j] = out[j] + bar * s
    return QModElement(g, tuple(out)).merged()


def shift_of(cert: QModCertificate, h: Polynomial) -> int:
    return cert.r - int(h.total_degree())


def shift_preorder_single(
    cert: PreorderCertificate,
    hcerts: Sequence[QModCertificate],
    shift: int | None = None,
    check: bool = True,
) -> QModElement:
    """Rewrite a preorder certificate over h as an element of Q(g_1)."""
    h = cert.gens
    s = h.m
    if len(hcerts) != s:
        raise ValueError(f"need {s} generator certificates, got {len(hcerts)}")
    if not hcerts:
        raise ValueError("no generator certificates supplied")
    g = hcerts[0].gens
    _require_singleton(g)
    shifts = []
    for i, hc in enumerate(hcerts, start=1):
        if hc.gens != g:
            raise ValueError("generator certificates disagree on the target generator")
        if check:
            report = verify_qmod(hc, h.generator(i))
            if not report.passed:
                raise ValueError(f"certificate for h_{i} fails: {report.violations}")
        shifts.append(shift_of(hc, h.generator(i)))
    ell = max(shifts)
    if shift is not None:
        if ell > shift:
            raise ValueError(f"generator certificates need shift {ell} > declared shift {shift}")
        ell = shift
    bad = {k: v for k, v in cert.term_degrees().items() if v > cert.r}
    if bad:
        raise ValueError(f"preorder certificate exceeds its degree r={cert.r}: {bad}")

    factors = [QModElement.from_certificate(hc) for hc in hcerts]
    products: dict = {(): QModElement.identity(g)}

    def product(I: tuple) -> QModElement:
        if I not in products:
            products[I] = qmod_multiply(product(I[:-1]), factors[I[-1] - 1])
        return products[I]

    n = g.n
    sigma0 = SosExpression.empty(n)
    sigma1 = SosExpression.empty(n)
    for I, sig in cert.sigma.items():
        if not sig.terms:
            continue
        prod = product(I)
        sigma0 = sigma0 + sig * prod.sigma[0]
        sigma1 = sigma1 + sig * prod.sigma[1]
    out = QModElement(g, (sigma0, sigma1)).merged()
    bound = cert.r + s * ell
    if out.degree() > bound:
        raise LiftingError("preorder->qmod", f"degree {out.degree()} exceeds d + s*l = {bound}")
    return out


@dataclass
class LiftLedger:
    n: int
    q: int
    eta2: object
    k: int
    claimed: int
    stages: list = field(default_factory=list)

    def add(self, stage: str, element: QModElement, bound: int):
        deg = element.degree()
        self.stages.append(
            {
                "stage": stage,
                "generators": element.gens.label,
                "degree": None if deg == NEG_INF else int(deg),
                "bound": bound,
                "summands": element.summand_count(),
            }
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "eta2": f"{self.eta2.numerator}/{self.eta2.denominator}",
            "k": self.k,
            "shift_per_generator": 2 * self.q - 2,
            "claimed_degree": self.claimed,
            "stages": self.stages,
        }


def lift_preorder_to_cube(
    cert: PreorderCertificate,
    params: ShiftParams,
    target: Polynomial | None = None,
) -> tuple[QModCertificate, LiftLedger]:
    """Lift T(eta^2 - x_i^2)_k to Q(1 - x_i^2)_{k + n(2q-2)}.

    Returns the cube certificate and a per-stage degree ledger. Raises
    :class:`LiftingError` naming the stage that failed.
    """
    gens = cert.gens
    if gens.label != "scaled-cube":
        raise LiftingError("input", f"expected scaled-cube generators, got {gens.label!r}")
    if gens.n != params.n or gens.eta2 != params.eta2:
        raise LiftingError("input", "certificate generators do not match the shift parameters")
    n, q, k = params.n, params.q, cert.r
    claimed = k + n * (2 * q - 2)
    ledger = LiftLedger(n, q, params.eta2, k, claimed)

    f = cert.expand()
    if target is not None:
        report = verify_preorder(cert, target)
        if not report.passed:
            raise LiftingError("input", f"preorder certificate fails: {report.violations}")
    else:
        bad = {key: v for key, v in cert.term_degrees().items() if v > k}
        if bad:
            raise LiftingError("input", f"multiplier degrees exceed k={k}: {bad}")

    box_certs = [cert_box_in_lnorm(params, i) for i in range(1, n + 1)]
    ledger.stages.append({"stage": "box-in-ball", "degree": 2 * q, "bound": 2 * q, "count": n})

    try:
        ball_element = shift_preorder_single(cert, box_certs)
    except ValueError as exc:
        raise LiftingError("preorder->ball", str(exc)) from exc
    ledger.add("preorder->ball", ball_element, claimed)
    if ball_element.expand() != f:
        raise LiftingError("preorder->ball", "expansion changed")

    try:
        cube_element = shift_qmod(ball_element, [cert_lnorm_in_cube(n, q)])
    except ValueError as exc:
        raise LiftingError("ball->cube", str(exc)) from exc
    ledger.add("ball->cube", cube_element, claimed)

    out = cube_element.to_certificate(claimed)
    report = verify_qmod(out, f)
    if not report.passed:
        raise LiftingError("ball->cube", f"lifted certificate fails: {report.violations}")
    log.debug("lifted n=%d q=%d k=%d to degree %d (%d summands)", n, q, k, claimed, cube_element.summand_count())
    return out, ledger
