"""Truncated quadratic-module and preordering certificates.

A certificate lists sum-of-squares multipliers for a generator tuple
``g = (g_1, ..., g_m)`` and claims a truncation degree ``r``. Verification
expands everything exactly, compares with the target coefficient by
coefficient, and checks ``deg(sigma_i * g_i) <= r`` term by term.
Failures are returned in a :class:`VerifyReport`, never raised.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .enclosures import exact_sqrt
from .polycore import (
    NEG_INF,
    Polynomial,
    as_rational,
    format_rational,
    parse,
)

LABELS = ("cube", "lnorm-ball", "scaled-cube", "custom")


def _normalize_summand(w: Fraction, p: Polynomial):
    # w * p^2 == (w c^2) * (p/c)^2 with c the leading coefficient
    _, c = p.leading_term()
    if c == 1:
        return w, p
    return w * c * c, p.scale(1 / c)


@dataclass(frozen=True)
class SosExpression:
    """``sum_j w_j * p_j**2`` with rational weights ``w_j >= 0``."""

    n: int
    terms: tuple = ()  # tuple of (Fraction weight, Polynomial)

    def __post_init__(self):
        clean = []
        for w, p in self.terms:
            w = as_rational(w)
            if w < 0:
                raise ValueError(f"negative SOS weight {w}")
            if p.n != self.n:
                raise ValueError(f"summand in {p.n} variables, expected {self.n}")
            clean.append((w, p))
        object.__setattr__(self, "terms", tuple(clean))

    @classmethod
    def of(cls, polys: Iterable[Polynomial], n: int | None = None) -> "SosExpression":
        polys = list(polys)
        if n is None:
            if not polys:
                raise ValueError("need n for an empty SOS expression")
            n = polys[0].n
        return cls(n, tuple((Fraction(1), p) for p in polys))

    @classmethod
    def weighted(cls, pairs: Iterable, n: int) -> "SosExpression":
        return cls(n, tuple(pairs))

    @classmethod
    def empty(cls, n: int) -> "SosExpression":
        return cls(n, ())

    @classmethod
    def constant(cls, w, n: int) -> "SosExpression":
        w = as_rational(w)
        return cls(n, ((w, Polynomial.one(n)),) if w else ())

    def __len__(self):
        return len(self.terms)

    def expand(self) -> Polynomial:
        total = Polynomial.zero(self.n)
        for w, p in self.terms:
            if w and p:
                total = total + p.square().scale(w)
        return total

    def degree(self):
        """Degree of the expansion: 2 * max summand degree (no cancellation)."""
        degs = [p.total_degree() for w, p in self.terms if w and p]
        return 2 * max(degs) if degs else NEG_INF

    def __add__(self, other: "SosExpression") -> "SosExpression":
        if other.n != self.n:
            raise ValueError("variable count mismatch")
        return SosExpression(self.n, self.terms + other.terms)

    def scale(self, c) -> "SosExpression":
        c = as_rational(c)
        if c < 0:
            raise ValueError("SOS expressions scale by nonnegative factors only")
        return SosExpression(self.n, tuple((w * c, p) for w, p in self.terms))

    def times_square(self, h: Polynomial) -> "SosExpression":
        """The SOS ``h^2 * self`` (each summand p becomes h*p)."""
        return SosExpression(self.n, tuple((w, p * h) for w, p in self.terms))

    def __mul__(self, other: "SosExpression") -> "SosExpression":
        if other.n != self.n:
            raise ValueError("variable count mismatch")
        return SosExpression(
            self.n, tuple((wa * wb, pa * pb) for wa, pa in self.terms for wb, pb in other.terms)
        )

    def map_polys(self, fn, n: int | None = None) -> "SosExpression":
        return SosExpression(self.n if n is None else n, tuple((w, fn(p)) for w, p in self.terms))

    def merged(self) -> "SosExpression":
        """Drop null summands and combine proportional squares."""
        acc: dict = {}
        for w, p in self.terms:
            if not w or not p:
                continue
            w, p = _normalize_summand(w, p)
            acc[p] = acc.get(p, 0) + w
        items = sorted(acc.items(), key=lambda kv: (kv[0].total_degree(), kv[0].format()))
        return SosExpression(self.n, tuple((w, p) for p, w in items))

    def to_json(self) -> list:
        return [{"w": format_rational(w), "p": p.format()} for w, p in self.terms]

    @classmethod
    def from_json(cls, data: Sequence[Mapping], n: int) -> "SosExpression":
        return cls(n, tuple((as_rational(str(item.get("w", "1"))), parse(item["p"], n)) for item in data))


def expand_sos(s, n: int | None = None) -> Polynomial:
    """Expand an SosExpression, or a plain list of polynomials as sum p_j^2."""
    if isinstance(s, SosExpression):
        return s.expand()
    polys = list(s)
    if not polys:
        if n is None:
            raise ValueError("an empty list needs n")
        return Polynomial.zero(n)
    return SosExpression.of(polys).expand()


# ---------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class GeneratorSet:
    n: int
    generators: tuple
    label: str = "custom"
    q: int | None = None
    eta: Fraction | None = None
    eta2: Fraction | None = None

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown generator label {self.label!r}")
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if g.n != self.n:
                raise ValueError("generator lives in the wrong ring")
        if self.label == "cube":
            expected = _cube_polys(self.n)
        elif self.label == "lnorm-ball":
            if self.q is None or self.q < 1:
                raise ValueError("lnorm-ball generators need q >= 1")
            expected = (_lnorm_poly(self.n, self.q),)
        elif self.label == "scaled-cube":
            eta, eta2 = resolve_eta(self.eta, self.eta2)
            object.__setattr__(self, "eta", eta)
            object.__setattr__(self, "eta2", eta2)
            expected = _scaled_cube_polys(self.n, eta2)
        else:
            return
        if gens != expected:
            raise ValueError(f"generators do not match label {self.label!r}")

    @property
    def m(self) -> int:
        return len(self.generators)

    def generator(self, i: int) -> Polynomial:
        """g_i with the convention g_0 = 1."""
        if i == 0:
            return Polynomial.one(self.n)
        return self.generators[i - 1]

    def product(self, subset: Sequence[int]) -> Polynomial:
        out = Polynomial.one(self.n)
        for i in subset:
            out = out * self.generators[i - 1]
        return out

    @classmethod
    def cube(cls, n: int) -> "GeneratorSet":
        return cls(n, _cube_polys(n), "cube")

    @classmethod
    def lnorm_ball(cls, n: int, q: int) -> "GeneratorSet":
        return cls(n, (_lnorm_poly(n, q),), "lnorm-ball", q=q)

    @classmethod
    def scaled_cube(cls, n: int, eta=None, *, eta2=None) -> "GeneratorSet":
        """Generators eta^2 - x_i^2; give either eta or (for irrational eta) eta^2."""
        eta, eta2 = resolve_eta(eta, eta2)
        return cls(n, _scaled_cube_polys(n, eta2), "scaled-cube", eta=eta, eta2=eta2)

    @classmethod
    def custom(cls, polys: Sequence[Polynomial], n: int) -> "GeneratorSet":
        return cls(n, tuple(polys), "custom")

    def to_json(self) -> dict:
        out: dict = {"label": self.label}
        if self.label == "lnorm-ball":
            out["q"] = self.q
        elif self.label == "scaled-cube":
            if self.eta is not None:
                out["eta"] = format_rational(self.eta)
            else:
                out["eta2"] = format_rational(self.eta2)
        elif self.label == "custom":
            out["polys"] = [g.format() for g in self.generators]
        return out

    @classmethod
    def from_json(cls, data: Mapping, n: int) -> "GeneratorSet":
        label = data["label"]
        if label == "cube":
            return cls.cube(n)
        if label == "lnorm-ball":
            return cls.lnorm_ball(n, int(data["q"]))
        if label == "scaled-cube":
            if "eta" in data:
                return cls.scaled_cube(n, as_rational(str(data["eta"])))
            return cls.scaled_cube(n, eta2=as_rational(str(data["eta2"])))
        if label == "custom":
            return cls.custom([parse(t, n) for t in data.get("polys", [])], n)
        raise ValueError(f"unknown generator label {label!r}")


def _cube_polys(n: int) -> tuple:
    return tuple(1 - Polynomial.var(i, n) ** 2 for i in range(1, n + 1))


def _lnorm_poly(n: int, q: int) -> Polynomial:
    terms = {(0,) * n: n}
    for i in range(n):
        mono = [0] * n
        mono[i] = 2 * q
        terms[tuple(mono)] = -1
    return Polynomial(n, terms)


def _scaled_cube_polys(n: int, eta2: Fraction) -> tuple:
    return tuple(eta2 - Polynomial.var(i, n) ** 2 for i in range(1, n + 1))


def resolve_eta(eta, eta2) -> tuple:
    """Normalize (eta, eta^2); eta stays None when eta^2 is not a rational square."""
    if eta is not None:
        eta = as_rational(eta)
        if eta <= 0:
            raise ValueError("eta must be positive")
        if eta2 is not None and as_rational(eta2) != eta * eta:
            raise ValueError("eta and eta2 disagree")
        return eta, eta * eta
    if eta2 is None:
        raise ValueError("scaled-cube generators need eta or eta2")
    eta2 = as_rational(eta2)
    if eta2 <= 0:
        raise ValueError("eta2 must be positive")
    return exact_sqrt(eta2), eta2


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class QModCertificate:
    """sigma[0] + sum_i sigma[i] * g_i, truncated at degree r."""

    gens: GeneratorSet
    sigma: tuple  # m + 1 SosExpressions
    r: int

    def __post_init__(self):
        sigma = tuple(self.sigma)
        if len(sigma) != self.gens.m + 1:
            raise ValueError(f"need {self.gens.m + 1} multipliers, got {len(sigma)}")
        for s in sigma:
            if s.n != self.gens.n:
                raise ValueError("multiplier lives in the wrong ring")
        object.__setattr__(self, "sigma", sigma)

    @property
    def n(self) -> int:
        return self.gens.n

    def terms(self):
        """Pairs (index, sigma_i, g_i)."""
        return [(i, s, self.gens.generator(i)) for i, s in enumerate(self.sigma)]

    def expand(self) -> Polynomial:
        total = Polynomial.zero(self.n)
        for _, s, g in self.terms():
            if s.terms:
                total = total + s.expand() * g
        return total

    def term_degrees(self) -> dict:
        return {str(i): s.degree() + g.total_degree() for i, s, g in self.terms()}

    def with_r(self, r: int) -> "QModCertificate":
        return QModCertificate(self.gens, self.sigma, r)

    def as_preorder(self) -> "PreorderCertificate":
        sigma = {(): self.sigma[0]}
        for i in range(1, len(self.sigma)):
            sigma[(i,)] = self.sigma[i]
        return PreorderCertificate(self.gens, sigma, self.r)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "generators": self.gens.to_json(),
            "kind": "qmod",
            "r": self.r,
            "sigma": {str(i): s.to_json() for i, s in enumerate(self.sigma)},
        }


@dataclass(frozen=True)
class PreorderCertificate:
    """sum over subsets I of sigma_I * prod_{i in I} g_i, truncated at degree r."""

    gens: GeneratorSet
    sigma: Mapping  # sorted index tuple -> SosExpression
    r: int

    def __post_init__(self):
        clean = {}
        for key, s in self.sigma.items():
            key = tuple(sorted(set(int(i) for i in key)))
            if any(not 1 <= i <= self.gens.m for i in key):
                raise ValueError(f"subset {key} out of range for {self.gens.m} generators")
            if s.n != self.gens.n:
                raise ValueError("multiplier lives in the wrong ring")
            clean[key] = clean[key] + s if key in clean else s
        object.__setattr__(self, "sigma", dict(sorted(clean.items(), key=lambda kv: (len(kv[0]), kv[0]))))

    @property
    def n(self) -> int:
        return self.gens.n

    def terms(self):
        return [(I, s, self.gens.product(I)) for I, s in self.sigma.items()]

    def expand(self) -> Polynomial:
        total = Polynomial.zero(self.n)
        for _, s, g in self.terms():
            if s.terms:
                total = total + s.expand() * g
        return total

    def term_degrees(self) -> dict:
        return {subset_key(I): s.degree() + g.total_degree() for I, s, g in self.terms()}

    def with_r(self, r: int) -> "PreorderCertificate":
        return PreorderCertificate(self.gens, self.sigma, r)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "generators": self.gens.to_json(),
            "kind": "preorder",
            "r": self.r,
            "sigma": {subset_key(I): s.to_json() for I, s in self.sigma.items()},
        }


def subset_key(I: Sequence[int]) -> str:
    return ",".join(str(i) for i in sorted(I))


def parse_subset_key(key: str) -> tuple:
    key = key.strip()
    if key in ("", "0"):
        return ()
    return tuple(sorted(int(k) for k in key.split(",")))


def all_subsets(m: int):
    for size in range(m + 1):
        yield from combinations(range(1, m + 1), size)


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyReport:
    passed: bool
    identity_ok: bool
    degrees_ok: bool
    r: int
    term_degrees: dict
    residual: Polynomial
    violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "identity_ok": self.identity_ok,
            "degrees_ok": self.degrees_ok,
            "r": self.r,
            "term_degrees": {k: (None if v == NEG_INF else int(v)) for k, v in self.term_degrees.items()},
            "residual": self.residual.format(),
            "residual_convention": "target - expansion",
            "violations": list(self.violations),
        }


def _term_product(args):
    s, g = args
    return s.expand() * g


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CUBE_PSATZ_THREADS", "1")))
    except ValueError:
        return 1


def _expand_terms(pairs: list) -> list:
    workers = min(_threads(), len(pairs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_term_product, pairs))
    return [_term_product(pair) for pair in pairs]


def _verify(terms: list, target: Polynomial, r: int) -> VerifyReport:
    degrees = {}
    violations = []
    for key, s, g in terms:
        deg = s.degree() + g.total_degree()
        degrees[key] = deg
        if deg > r:
            violations.append(f"term {key}: degree {int(deg)} > r = {r}")
    products = _expand_terms([(s, g) for _, s, g in terms if s.terms])
    total = Polynomial.zero(target.n)
    for prod in products:
        total = total + prod
    residual = target - total
    identity_ok = residual.is_zero()
    degrees_ok = not violations
    if not identity_ok:
        violations.append("identity mismatch: target - expansion != 0")
    return VerifyReport(identity_ok and degrees_ok, identity_ok, degrees_ok, r, degrees, residual, violations)


def verify_qmod(cert: QModCertificate, target: Polynomial) -> VerifyReport:
    if target.n != cert.n:
        raise ValueError(f"target has {target.n} variables, certificate {cert.n}")
    return _verify([(str(i), s, g) for i, s, g in cert.terms()], target, cert.r)


def verify_preorder(cert: PreorderCertificate, target: Polynomial) -> VerifyReport:
    if target.n != cert.n:
        raise ValueError(f"target has {target.n} variables, certificate {cert.n}")
    return _verify([(subset_key(I), s, g) for I, s, g in cert.terms()], target, cert.r)


def verify(cert, target: Polynomial) -> VerifyReport:
    if isinstance(cert, QModCertificate):
        return verify_qmod(cert, target)
    return verify_preorder(cert, target)


# ---------------------------------------------------------------------------
# restriction


def restrict_certificate(cert: QModCertificate, keep: int) -> QModCertificate:
    """Set x_{keep+1}, ..., x_n to zero in a cube certificate.

    The dropped generators 1 - x_i^2 restrict to 1, so their multipliers
    are folded into sigma_0. The truncation degree is unchanged.
    """
    if cert.gens.label != "cube":
        raise ValueError("restriction is defined for cube certificates only")
    n = cert.n
    if not 0 <= keep <= n:
        raise ValueError(f"keep must lie in [0, {n}]")
    if keep == n:
        return cert
    drop = range(keep + 1, n + 1)

    def restrict(s: SosExpression) -> SosExpression:
        return s.map_polys(lambda p: p.restrict_to_zero(drop), n=keep)

    sigma0 = restrict(cert.sigma[0])
    for i in drop:
        sigma0 = sigma0 + restrict(cert.sigma[i])
    sigma = [sigma0] + [restrict(cert.sigma[i]) for i in range(1, keep + 1)]
    return QModCertificate(GeneratorSet.cube(keep), tuple(sigma), cert.r)


# ---------------------------------------------------------------------------
# JSON


def certificate_to_json(cert) -> dict:
    return cert.to_json()


def certificate_from_json(data: Mapping):
    """Rebuild a QModCertificate or PreorderCertificate from its JSON form."""
    if not isinstance(data, Mapping):
        raise ValueError("certificate JSON must be an object")
    n = int(data["n"])
    gens = GeneratorSet.from_json(data["generators"], n)
    kind = data["kind"]
    r = int(data["r"])
    raw = data.get("sigma", {})
    if kind == "qmod":
        sigma = [SosExpression.empty(n) for _ in range(gens.m + 1)]
        for key, items in raw.items():
            idx = 0 if key.strip() in ("", "0") else int(key)
            if not 0 <= idx <= gens.m:
                raise ValueError(f"multiplier index {idx} out of range")
            sigma[idx] = sigma[idx] + SosExpression.from_json(items, n)
        return QModCertificate(gens, tuple(sigma), r)
    if kind == "preorder":
        sigma = {parse_subset_key(k): SosExpression.from_json(v, n) for k, v in raw.items()}
        return PreorderCertificate(gens, sigma, r)
    raise ValueError(f"unknown certificate kind {kind!r}")


def dumps(cert, **kw) -> str:
    return json.dumps(cert.to_json(), **kw)


def loads(text: str):
    return certificate_from_json(json.loads(text))
