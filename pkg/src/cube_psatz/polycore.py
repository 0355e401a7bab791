"""Exact sparse multivariate polynomials over the rationals.

Polynomials are immutable. Terms map dense exponent tuples to nonzero
``Fraction`` coefficients; the canonical term order is graded
lexicographic. Text I/O follows a small grammar::

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := rational | var | '(' expr ')'
    var    := 'x' uint
    rational := int ('/' uint)?

with an optional unary minus at the head of an expression.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from operator import add
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
Monomial = tuple  # tuple[int, ...] of length n
RationalLike = Union[int, Fraction, str]

#: Degree of the zero polynomial. Distinct from every integer degree and
#: absorbing under addition, so degree accounting never admits a zero
#: multiplier at the wrong degree.
NEG_INF = float("-inf")


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    """Bit-exact ``"num/den"`` text (denominator always present)."""
    return f"{q.numerator}/{q.denominator}"


def _grlex_key(mono: Monomial):
    # ascending total degree; within a degree x1-heavy monomials first
    return (sum(mono), tuple(-e for e in mono))


class Polynomial:
    """Immutable polynomial in ``n`` variables with rational coefficients."""

    __slots__ = ("_n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, RationalLike] | None = None):
        if n < 0:
            raise ValueError("variable count must be nonnegative")
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != n:
                    raise ValueError(f"monomial {mono} does not have {n} exponents")
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in {mono}")
                c = as_rational(c)
                if c:
                    clean[mono] = clean.get(mono, Fraction(0)) + c
            clean = {m: c for m, c in clean.items() if c}
        self._n = n
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Polynomial":
        # trusted constructor: terms already canonical (no zeros, right length)
        p = object.__new__(cls)
        p._n = n
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls._raw(n, {})

    @classmethod
    def constant(cls, c: RationalLike, n: int) -> "Polynomial":
        c = as_rational(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def one(cls, n: int) -> "Polynomial":
        return cls.constant(1, n)

    @classmethod
    def var(cls, i: int, n: int) -> "Polynomial":
        """The variable ``x_i`` (1-based) in ``n`` variables."""
        if not 1 <= i <= n:
            raise IndexError(f"variable index x{i} out of range for n={n}")
        mono = [0] * n
        mono[i - 1] = 1
        return cls._raw(n, {tuple(mono): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: RationalLike = 1) -> "Polynomial":
        return cls(len(exponents), {tuple(exponents): coeff})

    # -- basic accessors ----------------------------------------------
    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> dict:
        """A copy of the monomial -> coefficient map."""
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def total_degree(self):
        """Total degree; ``NEG_INF`` for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(sum(m) for m in self._terms)

    def degree_in(self, i: int):
        if not self._terms:
            return NEG_INF
        return max(m[i - 1] for m in self._terms)

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]))

    def leading_term(self):
        """Largest term in graded lex order (highest degree, x1-heaviest)."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        mono = max(self._terms, key=lambda m: (sum(m), m))
        return mono, self._terms[mono]

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    # -- equality / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._n == other._n and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other, self._n)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n, frozenset(self._terms.items())))
        return self._hash

    # -- ring operations ----------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other._n != self._n:
                raise ValueError(f"variable count mismatch: {self._n} vs {other._n}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(other, self._n)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s += c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial._raw(self._n, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self._n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if len(self._terms) < len(other._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out: dict = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(map(add, ma, mb))
                out[m] = get(m, 0) + ca * cb
        return Polynomial._raw(self._n, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c: RationalLike) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return Polynomial.zero(self._n)
        return Polynomial._raw(self._n, {m: v * c for m, v in self._terms.items()})

    def square(self) -> "Polynomial":
        """``self * self`` using the symmetric half of the product table."""
        items = list(self._terms.items())
        out: dict = {}
        get = out.get
        for idx, (ma, ca) in enumerate(items):
            m = tuple(e + e for e in ma)
            out[m] = get(m, 0) + ca * ca
            two_ca = 2 * ca
            for mb, cb in items[idx + 1:]:
                m = tuple(map(add, ma, mb))
                out[m] = get(m, 0) + two_ca * cb
        return Polynomial._raw(self._n, {m: c for m, c in out.items() if c})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.one(self._n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base.square()
        return result

    # -- substitutions --------------------------------------------------
    def substitute_scale(self, i: int, c: RationalLike) -> "Polynomial":
        """Replace ``x_i`` by ``c * x_i``. ``c = 0`` is refused."""
        c = as_rational(c)
        if not c:
            raise ValueError("scale factor must be nonzero; use restrict_to_zero")
        self._check_index(i)
        k = i - 1
        out = {}
        for m, v in self._terms.items():
            out[m] = v * c ** m[k] if m[k] else v
        return Polynomial._raw(self._n, out)

    def restrict_to_zero(self, variables: Iterable[int]) -> "Polynomial":
        """Set the listed variables to 0 and drop them from the ring."""
        drop = set(variables)
        for i in drop:
            self._check_index(i)
        keep = [k for k in range(self._n) if k + 1 not in drop]
        out = {}
        for m, v in self._terms.items():
            if any(m[i - 1] for i in drop):
                continue
            out[tuple(m[k] for k in keep)] = v
        return Polynomial._raw(len(keep), out)

    def embed(self, n: int, positions: Sequence[int]) -> "Polynomial":
        """Map variable ``x_k`` of ``self`` to ``x_{positions[k-1]}`` of an n-variable ring."""
        if len(positions) != self._n:
            raise ValueError("need one target position per variable")
        for pos in positions:
            if not 1 <= pos <= n:
                raise IndexError(f"target position {pos} out of range for n={n}")
        out: dict = {}
        for m, v in self._terms.items():
            new = [0] * n
            for e, pos in zip(m, positions):
                new[pos - 1] += e
            key = tuple(new)
            out[key] = out.get(key, 0) + v
        return Polynomial._raw(n, {m: c for m, c in out.items() if c})

    def compose(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``x_k -> images[k-1]`` (all images share one ring)."""
        if len(images) != self._n:
            raise ValueError("need one image per variable")
        if not images:
            return self
        m_out = images[0].n
        if any(img.n != m_out for img in images):
            raise ValueError("images live in different rings")
        powers = [{0: Polynomial.one(m_out)} for _ in images]

        def power(k, e):
            cache = powers[k]
            if e not in cache:
                cache[e] = images[k] ** e
            return cache[e]

        result = Polynomial.zero(m_out)
        for m, v in self._terms.items():
            term = Polynomial.constant(v, m_out)
            for k, e in enumerate(m):
                if e:
                    term = term * power(k, e)
            result = result + term
        return result

    def derivative(self, i: int = 1, order: int = 1) -> "Polynomial":
        """Formal partial derivative in ``x_i``."""
        self._check_index(i)
        k = i - 1
        out = {}
        for m, v in self._terms.items():
            e = m[k]
            if e < order:
                continue
            factor = math.perm(e, order)
            new = list(m)
            new[k] = e - order
            out[tuple(new)] = v * factor
        return Polynomial._raw(self._n, out)

    # -- evaluation ---------------------------------------------------
    def eval(self, point: Sequence[RationalLike]) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self._n:
            raise ValueError(f"point has {len(point)} coordinates, expected {self._n}")
        pt = [as_rational(v) for v in point]
        total = Fraction(0)
        for m, v in self._terms.items():
            t = v
            for x, e in zip(pt, m):
                if e:
                    t *= x ** e
            total += t
        return total

    def eval_float(self, point: Sequence[float]) -> float:
        """Floating-point value; not certified."""
        if len(point) != self._n:
            raise ValueError(f"point has {len(point)} coordinates, expected {self._n}")
        total = 0.0
        for m, v in self._terms.items():
            t = float(v)
            for x, e in zip(point, m):
                if e:
                    t *= x ** e
            total += t
        return total

    def __call__(self, *point):
        return self.eval(point)

    # -- text ---------------------------------------------------------
    def format(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for idx, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = -c if c < 0 else c
            vars_ = "*".join(
                f"x{k + 1}" if e == 1 else f"x{k + 1}^{e}" for k, e in enumerate(m) if e
            )
            coef = str(a)  # Fraction prints "p/q" or "p"
            if not vars_:
                body = coef
            elif a == 1:
                body = vars_
            else:
                body = f"{coef}*{vars_}"
            if idx == 0:
                pieces.append(body if sign == "+" else "-" + body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    __str__ = format

    def __repr__(self):
        return f"Polynomial(n={self._n}, {self.format()!r})"

    def _check_index(self, i: int):
        if not 1 <= i <= self._n:
            raise IndexError(f"variable index x{i} out of range for n={self._n}")


# ---------------------------------------------------------------------------
# parsing


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<var>x\d+)|(?P<op>[-+*^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.text = text
        self.n = n
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise PolynomialSyntaxError(message, tok[2], self.text)

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        negate = False
        if self.peek() == ("op", "-", self.peek()[2]):
            self.take()
            negate = True
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> Polynomial:
        base = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num" or "/" in tok[1]:
                self.error("exponent must be a nonnegative integer", tok)
            base = base ** int(tok[1])
        return base

    def base(self) -> Polynomial:
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return Polynomial.constant(Fraction(val.replace(" ", "")), self.n)
        if kind == "var":
            idx = int(val[1:])
            if not 1 <= idx <= self.n:
                raise PolynomialSyntaxError(
                    f"variable index {val} out of range for n={self.n}", pos, self.text
                )
            return Polynomial.var(idx, self.n)
        if kind == "op" and val == "(":
            inner = self.expr()
            close = self.take()
            if close[0] != "op" or close[1] != ")":
                self.error("expected ')'", close)
            return inner
        self.error(f"unexpected token {val!r}" if val else "unexpected end of input", tok)


def parse(text: str, n: int) -> Polynomial:
    """Parse polynomial text in ``n`` variables into canonical form."""
    return _Parser(text, n).parse()


def format_poly(p: Polynomial) -> str:
    return p.format()


def total_degree(p: Polynomial):
    return p.total_degree()


def substitute_scale(p: Polynomial, i: int, c: RationalLike) -> Polynomial:
    return p.substitute_scale(i, c)


def restrict_to_zero(p: Polynomial, variables: Iterable[int]) -> Polynomial:
    return p.restrict_to_zero(variables)
