"""Multivariate polynomials over F_q.

Monomials are plain exponent tuples ``(a_1, ..., a_d)``.  A polynomial is an
immutable map from monomials to nonzero field integers (see
:mod:`fpure.ffield` for the encoding).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .ffield import FieldElement, FieldSpec

__all__ = [
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "block_order",
    "PolynomialRing",
    "Polynomial",
    "ParseError",
    "RingMismatchError",
    "monomial_norm",
    "monomial_mul",
    "monomial_div",
    "monomial_divides",
    "monomial_lcm",
]


class ParseError(ValueError):
    def __init__(self, msg, text="", pos=0):
        super().__init__(f"{msg} at position {pos}: {text!r}" if text else msg)
        self.pos = pos


class RingMismatchError(ValueError):
    pass


def monomial_norm(m) -> int:
    return max(m, default=0)


def monomial_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def monomial_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def monomial_divides(a, b) -> bool:
    """True when the monomial ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


# -- orders ---------------------------------------------------------------------


def _grevlex_key(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order; ``key(m1) < key(m2)`` iff ``m1 < m2``.

    ``block`` compares the first ``k`` variables lexicographically and breaks
    ties with grevlex on the remaining ones.
    """

    kind: str = "grevlex"
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, e):
        if self.kind == "grevlex":
            return _grevlex_key(e)
        if self.kind == "lex":
            return tuple(e)
        k = self.k
        return tuple(e[:k]) + _grevlex_key(e[k:])

    def __str__(self):
        return f"block({self.k})" if self.kind == "block" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(k: int) -> MonomialOrder:
    return MonomialOrder("block", k)


# -- rings ----------------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class PolynomialRing:
    """F_q[x_1, ..., x_d] with a fixed monomial order."""

    def __init__(self, field: FieldSpec, variables, order: MonomialOrder = GREVLEX):
        if isinstance(variables, str):
            variables = [v.strip() for v in variables.split(",") if v.strip()]
        variables = tuple(variables)
        if not variables:
            raise ValueError("a polynomial ring needs at least one variable")
        for v in variables:
            if not _IDENT.fullmatch(v):
                raise ValueError(f"bad variable name {v!r}")
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        if field.f > 1 and "z" in variables:
            raise ValueError("'z' is reserved for the generator of an extension field")
        self.field = field
        self.variables = variables
        self.order = order
        self.ngens = len(variables)
        self._index = {v: i for i, v in enumerate(variables)}
        self.key = order.key

    def __eq__(self, other):
        return (isinstance(other, PolynomialRing) and self.field == other.field
                and self.variables == other.variables and self.order == other.order)

    def __hash__(self):
        return hash((self.field, self.variables, self.order))

    def __repr__(self):
        return f"PolynomialRing({self.field!s}, {','.join(self.variables)}, {self.order})"

    def __reduce__(self):
        return (PolynomialRing, (self.field, self.variables, self.order))

    def with_order(self, order: MonomialOrder) -> PolynomialRing:
        return PolynomialRing(self.field, self.variables, order)

    # constructors

    @property
    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    @property
    def one(self) -> Polynomial:
        return self.constant(1)

    @property
    def gens(self):
        return [self.var(v) for v in self.variables]

    @property
    def unit_monomial(self):
        return (0,) * self.ngens

    def var(self, name: str) -> Polynomial:
        i = self._index[name]
        e = [0] * self.ngens
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def constant(self, c) -> Polynomial:
        c = self._coef(c)
        return Polynomial(self, {self.unit_monomial: c} if c else {})

    def monomial(self, exps, coef=1) -> Polynomial:
        exps = tuple(int(a) for a in exps)
        if len(exps) != self.ngens or min(exps) < 0:
            raise ValueError(f"bad exponent vector {exps}")
        c = self._coef(coef)
        return Polynomial(self, {exps: c} if c else {})

    def from_dict(self, terms) -> Polynomial:
        """Build from ``{exponent tuple: coefficient}``; zero coefficients dropped."""
        out = {}
        F = self.field
        for m, c in terms.items():
            c = self._coef(c)
            m = tuple(m)
            if c:
                out[m] = F.add(out.get(m, 0), c)
                if not out[m]:
                    del out[m]
        return Polynomial(self, out)

    def _coef(self, c) -> int:
        if isinstance(c, FieldElement):
            self.field._check(c.spec)
            return c.value
        return self.field.from_int(int(c))

    def box(self, l: int):
        """All monomials with every exponent at most ``l``, in decreasing order."""
        mons = list(itertools.product(range(l + 1), repeat=self.ngens))
        mons.sort(key=self.key, reverse=True)
        return mons

    def parse(self, text: str) -> Polynomial:
        return _Parser(self, text).parse()

    def __call__(self, text) -> Polynomial:
        if isinstance(text, Polynomial):
            if text.ring != self:
                raise RingMismatchError(f"{text.ring} vs {self}")
            return text
        if isinstance(text, str):
            return self.parse(text)
        return self.constant(text)


# -- polynomials ------------------------------------------------------------------


class Polynomial:
    """Immutable element of a :class:`PolynomialRing`.

    ``terms`` must not be mutated after construction; it maps exponent
    tuples to nonzero field integers.
    """

    __slots__ = ("ring", "terms", "_hash", "_lm")

    def __init__(self, ring: PolynomialRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None
        self._lm = None

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def support(self):
        return set(self.terms)

    def norm(self) -> int:
        """Largest exponent of any variable in any term; 0 for constants and 0."""
        return max((max(m, default=0) for m in self.terms), default=0)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def coefficient(self, m) -> FieldElement:
        return FieldElement(self.ring.field, self.terms.get(tuple(m), 0))

    def constant_term(self) -> int:
        return self.terms.get(self.ring.unit_monomial, 0)

    def leading_monomial(self):
        if self._lm is None:
            if not self.terms:
                raise ValueError("the zero polynomial has no leading monomial")
            self._lm = max(self.terms, key=self.ring.key)
        return self._lm

    def leading_coefficient(self) -> int:
        return self.terms[self.leading_monomial()]

    def monic(self) -> Polynomial:
        if not self.terms:
            return self
        c = self.leading_coefficient()
        if c == 1:
            return self
        return self.scale(self.ring.field.inv(c))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]), reverse=True)

    # arithmetic

    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, FieldElement)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = F.add(out.get(m, 0), c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Polynomial(self.ring, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.ring.field
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                v = F.add(out.get(m, 0), F.mul(c1, c2))
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one
        base = self
        p = self.ring.field.p
        while n:
            # in characteristic p, raising to the p-th power is a term-wise map
            n, r = divmod(n, p)
            for _ in range(r):
                result = result * base
            if n:
                base = base.frobenius_power(p)
        return result

    def scale(self, c: int) -> Polynomial:
        if not c:
            return self.ring.zero
        F = self.ring.field
        return Polynomial(self.ring, {m: F.mul(v, c) for m, v in self.terms.items()})

    def mul_term(self, mono, c: int = 1) -> Polynomial:
        F = self.ring.field
        if not c:
            return self.ring.zero
        return Polynomial(self.ring, {tuple(x + y for x, y in zip(m, mono)): F.mul(v, c)
                                      for m, v in self.terms.items()})

    def frobenius_power(self, pe: int) -> Polynomial:
        """``self ** pe`` for ``pe`` a power of the characteristic."""
        F = self.ring.field
        e = _log_p(pe, F.p)
        return Polynomial(self.ring, {tuple(pe * a for a in m): F.frobenius(c, e)
                                      for m, c in self.terms.items()})

    def divmod(self, divisor: Polynomial):
        """Multivariate division by a single polynomial: ``self = q * divisor + r``."""
        divisor = self._check(divisor)
        if not divisor:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.ring.field
        key = self.ring.key
        lm = divisor.leading_monomial()
        lc_inv = F.inv(divisor.leading_coefficient())
        rest = dict(self.terms)
        quot, rem = {}, {}
        while rest:
            m = max(rest, key=key)
            c = rest.pop(m)
            if monomial_divides(lm, m):
                t = monomial_div(m, lm)
                k = F.mul(c, lc_inv)
                quot[t] = k
                for m2, c2 in divisor.terms.items():
                    if m2 == lm:
                        continue
                    mm = monomial_mul(m2, t)
                    v = F.sub(rest.get(mm, 0), F.mul(k, c2))
                    if v:
                        rest[mm] = v
                    else:
                        rest.pop(mm, None)
            else:
                rem[m] = c
        return Polynomial(self.ring, quot), Polynomial(self.ring, rem)

    def exact_div(self, divisor: Polynomial) -> Polynomial:
        q, r = self.divmod(divisor)
        if r:
            raise ArithmeticError(f"{divisor} does not divide {self}")
        return q

    # comparisons

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, FieldElement)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # printing

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.ring.field
        names = self.ring.variables
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, a in zip(names, m):
                if a == 1:
                    factors.append(name)
                elif a > 1:
                    factors.append(f"{name}^{a}")
            cs = F.format(c)
            if F.f > 1 and ("+" in cs or "*" in cs or (cs.startswith("z") and factors)):
                cs = f"({cs})"
            if not factors:
                parts.append(cs)
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([cs] + factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({self})"

    def __reduce__(self):
        return (Polynomial, (self.ring, self.terms))


def _log_p(pe, p):
    e = 0
    n = pe
    while n > 1 and n % p == 0:
        n //= p
        e += 1
    if n != 1 or pe < 1:
        raise ValueError(f"{pe} is not a power of {p}")
    return e


# -- parser -----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class _Parser:
    """Recursive descent over ``expr := ['+'|'-'] term (('+'|'-') term)*``,
    ``term := power ('*' power)*``, ``power := atom ['^' int]``,
    ``atom := int | ident | '(' expr ')'``.
    """

    def __init__(self, ring: PolynomialRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            if m.group(1) is not None:
                self.tokens.append(("int", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("ident", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                self.tokens.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def error(self, msg, pos=None):
        if pos is None:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise ParseError(msg, self.text, pos)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if not self.tokens:
            self.error("empty expression")
        p = self.expr()
        if self.i != len(self.tokens):
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        kind, val, _ = self.peek()
        neg = False
        if kind == "op" and val in "+-":
            self.take()
            neg = val == "-"
        acc = self.term()
        if neg:
            acc = -acc
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self):
        acc = self.power()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.power()
            elif kind in ("int", "ident") or (kind == "op" and val == "("):
                self.error("implicit multiplication is not allowed")
            else:
                return acc

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                self.error("expected a nonnegative integer exponent", pos)
            return base ** int(val)
        return base

    def atom(self):
        kind, val, pos = self.take()
        ring = self.ring
        if kind == "int":
            return ring.constant(int(val))
        if kind == "ident":
            if val in ring._index:
                return ring.var(val)
            if val == "z" and ring.field.f > 1:
                return ring.constant(FieldElement(ring.field, ring.field.p))
            self.error(f"unknown variable {val!r}", pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val, pos = self.take()
            if kind != "op" or val != ")":
                self.error("expected ')'", pos)
            return inner
        if kind is None:
            self.error("unexpected end of input", pos)
        self.error(f"unexpected {val!r}", pos)
