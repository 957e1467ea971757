"""Exact arithmetic in the finite field F_q, q = p^f.

Elements are stored as plain integers ``0 <= a < q``.  For an extension field
the integer encodes the coefficient vector of a polynomial in the generator
``z`` in base p, so ``a = c_0 + c_1 p + ... + c_{f-1} p^{f-1}``.  Extension
fields are backed by precomputed tables; prime fields use modular arithmetic.

:class:`FieldElement` is a thin immutable wrapper for user-facing code.  The
polynomial and linear-algebra layers work on raw integers through the
:class:`FieldSpec` methods.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "FieldSpec",
    "FieldElement",
    "FieldMismatchError",
    "is_prime",
    "parse_field",
]

MAX_EXTENSION_ORDER = 1024


class FieldMismatchError(ValueError):
    """Raised when operands live in different fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def _poly_mulmod(a, b, modulus, p):
    # a, b: coefficient lists (low degree first) of length f; modulus monic, length f+1
    f = len(modulus) - 1
    prod = [0] * (2 * f - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, f - 1, -1):
        c = prod[k]
        if c:
            for j in range(f + 1):
                prod[k - f + j] = (prod[k - f + j] - c * modulus[j]) % p
    return prod[:f]


def _has_factor_of_degree(modulus, p, deg):
    """Trial division of ``modulus`` by every monic polynomial of degree ``deg``."""
    for tail in itertools.product(range(p), repeat=deg):
        divisor = list(tail) + [1]
        rem = list(modulus)
        for k in range(len(rem) - 1, deg - 1, -1):
            c = rem[k]
            if c:
                for j in range(deg + 1):
                    rem[k - deg + j] = (rem[k - deg + j] - c * divisor[j]) % p
        if not any(rem[:deg]):
            return True
    return False


def _is_irreducible(modulus, p):
    f = len(modulus) - 1
    return not any(_has_factor_of_degree(modulus, p, k) for k in range(1, f // 2 + 1))


class FieldSpec:
    """The field F_q = F_p[z]/(modulus).

    ``modulus`` lists coefficients from the constant term upward and must be
    monic and irreducible of degree ``f``.  For ``f == 1`` it may be omitted.
    """

    def __init__(self, p: int, f: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if f < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            if f != 1:
                raise ValueError("an extension field needs an explicit modulus")
            modulus = (0, 1)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f + 1 or modulus[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {f}: {modulus}")
        if f > 1 and not _is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = modulus
        if f > 1:
            if self.q > MAX_EXTENSION_ORDER:
                raise ValueError(f"extension fields are limited to q <= {MAX_EXTENSION_ORDER}")
            self._build_tables()
        else:
            self._frob = None

    # -- construction helpers -------------------------------------------------

    def _digits(self, a):
        out = []
        for _ in range(self.f):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _from_digits(self, digits):
        a = 0
        for c in reversed(digits):
            a = a * self.p + c
        return a

    def _build_tables(self):
        q, p = self.q, self.p
        digits = [self._digits(a) for a in range(q)]
        add = [[self._from_digits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                for b in range(q)] for a in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(1, q):
            for b in range(a, q):
                c = self._from_digits(_poly_mulmod(digits[a], digits[b], self.modulus, p))
                mul[a][b] = mul[b][a] = c
        neg = [self._from_digits([(-x) % p for x in digits[a]]) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            row = mul[a]
            inv[a] = row.index(1)
        frob = [0] * q
        for a in range(q):
            r = 1
            for _ in range(p):
                r = mul[r][a]
            frob[a] = r
        ifrob = [0] * q
        for a, b in enumerate(frob):
            ifrob[b] = a
        self._add, self._mul, self._neg, self._inv = add, mul, neg, inv
        self._frob, self._ifrob = frob, ifrob

    # -- raw integer arithmetic ---------------------------------------------

    @property
    def is_prime_field(self) -> bool:
        return self.f == 1

    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a - b) % self.p
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        if self.f == 1:
            return -a % self.p
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return a * b % self.p
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero in finite field")
        if self.f == 1:
            return pow(a, -1, self.p)
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if self.f == 1:
            return pow(a, n, self.p)
        r = 1
        while n:
            if n & 1:
                r = self._mul[r][a]
            a = self._mul[a][a]
            n >>= 1
        return r

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under Z -> F_q."""
        return n % self.p

    def frobenius(self, a: int, e: int = 1) -> int:
        """a^(p^e)."""
        if e < 0:
            raise ValueError("e must be >= 0")
        if self.f == 1:
            return a
        for _ in range(e % self.f):
            a = self._frob[a]
        return a

    def inv_frobenius(self, a: int, e: int = 1) -> int:
        """The unique b with b^(p^e) = a."""
        if e < 0:
            raise ValueError("e must be >= 0")
        if self.f == 1:
            return a
        for _ in range(e % self.f):
            a = self._ifrob[a]
        return a

    # -- tables for vectorised kernels -----------------------------------------

    @cached_property
    def tables(self):
        """(add, mul, neg, inv) as int64 numpy arrays."""
        q = self.q
        if self.f == 1:
            r = np.arange(q, dtype=np.int64)
            add = (r[:, None] + r[None, :]) % q
            mul = (r[:, None] * r[None, :]) % q
            neg = (-r) % q
            inv = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                inv[a] = pow(a, -1, q)
            return add, mul, neg, inv
        return (np.array(self._add, dtype=np.int64), np.array(self._mul, dtype=np.int64),
                np.array(self._neg, dtype=np.int64), np.array(self._inv, dtype=np.int64))

    # -- elements and text -----------------------------------------------------

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            self._check(value.spec)
            return value
        if isinstance(value, str):
            return FieldElement(self, self.parse_element(value))
        return FieldElement(self, self.from_int(int(value)))

    def gen(self) -> FieldElement:
        """The class of z in an extension field."""
        if self.f == 1:
            raise ValueError("a prime field has no polynomial generator")
        return FieldElement(self, self.p)

    def elements(self):
        return [FieldElement(self, a) for a in range(self.q)]

    def _check(self, other: FieldSpec):
        if other is not self and other != self:
            raise FieldMismatchError(f"{self} vs {other}")

    def format(self, a: int) -> str:
        if self.f == 1:
            return str(a)
        parts = []
        for k, c in reversed(list(enumerate(self._digits(a)))):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mono = "z" if k == 1 else f"z^{k}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(parts) if parts else "0"

    def parse_element(self, text: str) -> int:
        """Parse an integer or a polynomial in ``z`` such as ``z^2+2*z+1``."""
        text = text.replace(" ", "")
        if re.fullmatch(r"-?\d+", text):
            return self.from_int(int(text))
        if self.f == 1 or not re.fullmatch(r"[0-9z^*+\-]+", text):
            raise ValueError(f"cannot parse field element {text!r}")
        total = 0
        for sign, term in re.findall(r"([+-]?)([^+-]+)", text):
            m = re.fullmatch(r"(?:(\d+)\*?)?(z)?(?:\^(\d+))?", term)
            if not m or (m.group(3) and not m.group(2)):
                raise ValueError(f"cannot parse field element {text!r}")
            coef = self.from_int(int(m.group(1)) if m.group(1) else 1)
            k = (int(m.group(3)) if m.group(3) else 1) if m.group(2) else 0
            val = self.mul(coef, self.pow(self.p, k))
            total = self.sub(total, val) if sign == "-" else self.add(total, val)
        return total

    def __eq__(self, other):
        return (isinstance(other, FieldSpec) and self.p == other.p and self.f == other.f
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.f, self.modulus))

    def __repr__(self):
        if self.f == 1:
            return f"FieldSpec({self.p})"
        return f"FieldSpec({self.p}, {self.f}, {self.modulus})"

    def __str__(self):
        if self.f == 1:
            return str(self.p)
        return f"{self.q}:" + ",".join(map(str, self.modulus))

    def __reduce__(self):
        return (FieldSpec, (self.p, self.f, self.modulus))


def parse_field(text: str) -> FieldSpec:
    """Parse ``"p"`` or ``"q:c0,c1,...,cf"`` (modulus coefficients, constant first)."""
    text = text.strip()
    if ":" not in text:
        try:
            p = int(text)
        except ValueError:
            raise ValueError(f"bad field specification {text!r}") from None
        return FieldSpec(p)
    head, coeffs = text.split(":", 1)
    try:
        q = int(head)
        modulus = [int(c) for c in coeffs.split(",")]
    except ValueError:
        raise ValueError(f"bad field specification {text!r}") from None
    f = len(modulus) - 1
    p = round(q ** (1 / f)) if f >= 1 else 0
    for cand in (p - 1, p, p + 1):
        if cand > 1 and cand**f == q:
            p = cand
            break
    else:
        raise ValueError(f"{q} is not a {f}-th power of a prime")
    return FieldSpec(p, f, modulus)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            self.spec._check(other.spec)
            return other.value
        if isinstance(other, int):
            return self.spec.from_int(other)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.sub(b, self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.div(b, self.value))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __pow__(self, n: int):
        return FieldElement(self.spec, self.spec.pow(self.value, n))

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, int):
            return self.value == self.spec.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec, self.value))

    def inverse(self) -> FieldElement:
        return FieldElement(self.spec, self.spec.inv(self.value))

    def frobenius(self, e: int = 1) -> FieldElement:
        return FieldElement(self.spec, self.spec.frobenius(self.value, e))

    def inv_frobenius(self, e: int = 1) -> FieldElement:
        return FieldElement(self.spec, self.spec.inv_frobenius(self.value, e))

    def __str__(self):
        return self.spec.format(self.value)

    def __repr__(self):
        return f"FieldElement({self.spec!s}, {self.spec.format(self.value)})"
