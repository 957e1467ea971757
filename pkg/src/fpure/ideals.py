"""Ideals of F_q[x_1..x_d] and the operations on them.

An :class:`Ideal` keeps its generators as given and computes the reduced
Gröbner basis for the ring's order on first use.  The reduced basis is the
canonical form: two ideals are equal exactly when their :attr:`Ideal.key`
values agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .groebner import NormalForm, reduced_groebner, rows_to_dicts
from .polyring import (
    Polynomial,
    PolynomialRing,
    RingMismatchError,
    block_order,
    monomial_norm,
)

__all__ = [
    "Ideal",
    "Box",
    "VectorSpaceSlice",
    "groebner",
    "nf",
    "ideal_sum",
    "ideal_product",
    "intersect",
    "colon",
    "bracket_power",
    "equals",
    "contains",
    "minimal_generators",
    "truncate",
    "box_slice",
    "maximal_ideal",
]


class Ideal:
    """Ideal given by a finite generator list."""

    __slots__ = ("ring", "gens", "_gb", "_key", "_nf")

    def __init__(self, ring: PolynomialRing, gens=()):
        out = []
        for g in gens:
            g = ring(g)
            if g:
                out.append(g)
        self.ring = ring
        self.gens = tuple(out)
        self._gb = None
        self._key = None
        self._nf = None

    @classmethod
    def from_gb(cls, ring, gb_terms):
        """Wrap an already reduced Gröbner basis given as term dictionaries."""
        I = cls.__new__(cls)
        I.ring = ring
        I._gb = tuple(Polynomial(ring, t) for t in gb_terms)
        I.gens = I._gb
        I._key = None
        I._nf = None
        return I

    @classmethod
    def unit(cls, ring):
        return cls(ring, [ring.one])

    @classmethod
    def zero(cls, ring):
        return cls(ring, [])

    # canonical form

    @property
    def gb(self):
        """Reduced Gröbner basis, monic, sorted by decreasing leading monomial."""
        if self._gb is None:
            ring = self.ring
            terms = reduced_groebner([g.terms for g in self.gens], ring.field, ring.key)
            self._gb = tuple(Polynomial(ring, t) for t in terms)
        return self._gb

    @property
    def key(self):
        if self._key is None:
            self._key = tuple(tuple(sorted(g.terms.items())) for g in self.gb)
        return self._key

    def normal_form(self) -> NormalForm:
        """Memoised normal-form helper for this ideal's Gröbner basis."""
        if self._nf is None:
            self._nf = NormalForm([g.terms for g in self.gb], self.ring.field, self.ring.key)
        return self._nf

    def __getstate__(self):
        return (self.ring, self.gens, self._gb)

    def __setstate__(self, state):
        self.ring, self.gens, self._gb = state
        self._key = None
        self._nf = None

    # predicates

    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        gb = self.gb
        return len(gb) == 1 and gb[0].is_constant()

    def in_maximal_ideal(self) -> bool:
        """True when every element vanishes at the origin."""
        return all(not g.constant_term() for g in self.gens)

    def nf(self, f) -> Polynomial:
        f = self.ring(f)
        if self.is_zero():
            return f
        return Polynomial(self.ring, self.normal_form().poly(f.terms))

    def __contains__(self, f) -> bool:
        return not self.nf(f)

    def contains(self, other: Ideal) -> bool:
        """``other`` is a subset of ``self``."""
        _same_ring(self, other)
        return all(g in self for g in other.gens)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __le__(self, other):
        return other.contains(self)

    def __lt__(self, other):
        return other.contains(self) and self != other

    # operations

    def __add__(self, other):
        return ideal_sum(self, other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Ideal(self.ring, [g * other for g in self.gens])
        return ideal_product(self, other)

    __rmul__ = __mul__

    def generator_strings(self):
        """Reduced Gröbner basis elements as strings, sorted lexicographically."""
        return sorted(str(g) for g in self.gb)

    def __str__(self):
        if self.is_zero():
            return "<0>"
        return "<" + ", ".join(str(g) for g in self.gb) + ">"

    def __repr__(self):
        return f"Ideal{self}"


def _same_ring(I, J):
    if I.ring != J.ring:
        raise RingMismatchError(f"{I.ring} vs {J.ring}")


def maximal_ideal(ring) -> Ideal:
    """The ideal generated by all variables."""
    return Ideal.from_gb(ring, sorted(({tuple(g.terms)[0]: 1} for g in ring.gens),
                                      key=lambda t: ring.key(next(iter(t))), reverse=True))


# -- basic operations ---------------------------------------------------------------


def groebner(I: Ideal):
    return list(I.gb)


def nf(f, I: Ideal) -> Polynomial:
    return I.nf(f)


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    out = Ideal(I.ring, I.gens + J.gens)
    if I._gb is not None and J.is_zero():
        out._gb = I._gb
    return out


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    return Ideal(I.ring, [a * b for a in I.gens for b in J.gens])


def equals(I: Ideal, J: Ideal) -> bool:
    _same_ring(I, J)
    return I.key == J.key


def contains(I: Ideal, J: Ideal) -> bool:
    """J is a subset of I."""
    return I.contains(J)


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J by eliminating t from ``t I + (1 - t) J``."""
    _same_ring(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal.zero(ring)
    tname = "t"
    while tname in ring.variables:
        tname = "_" + tname
    ext = PolynomialRing(ring.field, (tname,) + ring.variables, block_order(1))
    F = ring.field

    def lift(g, shift):
        return {(shift,) + m: c for m, c in g.terms.items()}

    gens = []
    for g in I.gens:
        gens.append(lift(g, 1))
    for h in J.gens:
        a = lift(h, 0)
        b = {(1,) + m[1:]: F.neg(c) for m, c in a.items()}
        gens.append({**a, **b})
    gb = reduced_groebner(gens, F, ext.key)
    kept = [{m[1:]: c for m, c in g.items()} for g in gb if all(m[0] == 0 for m in g)]
    return Ideal(ring, [Polynomial(ring, t) for t in kept])


def colon(I: Ideal, u) -> Ideal:
    """(I : u) = {a : a u in I}."""
    ring = I.ring
    u = ring(u)
    if not u:
        return Ideal.unit(ring)
    if I.is_zero():
        return Ideal.zero(ring)
    K = intersect(I, Ideal(ring, [u]))
    return Ideal(ring, [g.exact_div(u) for g in K.gb])


def bracket_power(I: Ideal, pe: int) -> Ideal:
    """Ideal generated by the ``pe``-th powers of the generators (``pe = p^e``)."""
    ring = I.ring
    if pe == 1:
        return I
    gens = [g.frobenius_power(pe) for g in I.gens]
    out = Ideal(ring, gens)
    if I._gb is not None:
        # Frobenius maps a reduced Gröbner basis to a reduced Gröbner basis
        out._gb = tuple(g.frobenius_power(pe) for g in I._gb)
    return out


def minimal_generators(I: Ideal):
    """Elements of ``I`` whose classes form a basis of I/mI."""
    if I.is_zero():
        raise ValueError("the zero ideal has no minimal generators")
    if not I.in_maximal_ideal():
        raise ValueError("minimal generators need an ideal inside the maximal ideal")
    return _nakayama_basis(I, maximal_ideal(I.ring) * I)


def _nakayama_basis(I: Ideal, mI: Ideal):
    """Greedy choice among the Gröbner basis of I of elements independent modulo mI."""
    ring = I.ring
    F = ring.field
    nfc = mI.normal_form()
    chosen = []
    pivots = []  # (pivot monomial, reduced vector)
    for g in sorted(I.gb, key=lambda g: ring.key(g.leading_monomial())):
        v = nfc.poly(g.terms)
        for pm, pv in pivots:
            c = v.get(pm, 0)
            if c:
                for m, a in pv.items():
                    w = F.sub(v.get(m, 0), F.mul(c, a))
                    if w:
                        v[m] = w
                    else:
                        v.pop(m, None)
        if v:
            pm = max(v, key=ring.key)
            ci = F.inv(v[pm])
            pv = {m: F.mul(a, ci) for m, a in v.items()}
            for k, (qm, qv) in enumerate(pivots):
                c = qv.get(pm, 0)
                if c:
                    for m, a in pv.items():
                        w = F.sub(qv.get(m, 0), F.mul(c, a))
                        if w:
                            qv[m] = w
                        else:
                            qv.pop(m, None)
            pivots.append((pm, pv))
            chosen.append(g)
    return chosen


# -- the box S_l ----------------------------------------------------------------------


class Box:
    """Monomials with every exponent at most ``l``, ordered decreasingly."""

    def __init__(self, ring: PolynomialRing, l: int):
        self.ring = ring
        self.l = l
        self.monomials = ring.box(l)
        self.index = {m: i for i, m in enumerate(self.monomials)}

    def __len__(self):
        return len(self.monomials)

    def polys(self, M):
        return [Polynomial(self.ring, t) for t in rows_to_dicts(M, self.monomials)]

    def matrix(self, polys):
        M = np.zeros((len(polys), len(self)), dtype=np.int64)
        for r, f in enumerate(polys):
            for m, c in f.terms.items():
                M[r, self.index[m]] = c
        return M


@lru_cache(maxsize=64)
def _box(ring, l):
    return Box(ring, l)


def get_box(ring, l) -> Box:
    return _box(ring, l)


@dataclass
class VectorSpaceSlice:
    """Basis of ``{f in I : ||f|| <= l}``."""

    l: int
    basis: list

    @property
    def dim(self):
        return len(self.basis)


def box_matrix(I: Ideal, box: Box):
    """Rows spanning I ∩ S_l in reduced echelon form over ``box.monomials``.

    For a monomial ``m`` divisible by a leading monomial, ``m - nf(m)`` lies in
    I; a combination of those lies in the box exactly when its normal-form
    parts outside the box cancel.  Standard monomials never lie in I.
    """
    n = len(box)
    if I.is_zero():
        return np.zeros((0, n), dtype=np.int64)
    if I.is_unit():
        return np.eye(n, dtype=np.int64)
    F = I.ring.field
    l = box.l
    nfc = I.normal_form()
    nonstd = [m for m in box.monomials if not nfc.is_standard(m)]
    if not nonstd:
        return np.zeros((0, n), dtype=np.int64)
    forms = [nfc.monomial(m) for m in nonstd]
    outside = sorted({s for r in forms for s in r if monomial_norm(s) > l})
    N = np.zeros((len(nonstd), n), dtype=np.int64)
    for i, (m, r) in enumerate(zip(nonstd, forms)):
        N[i, box.index[m]] = 1
        for s, c in r.items():
            j = box.index.get(s)
            if j is not None:
                N[i, j] = F.neg(c)
    if outside:
        oi = {s: j for j, s in enumerate(outside)}
        A = np.zeros((len(nonstd), len(outside)), dtype=np.int64)
        for i, r in enumerate(forms):
            for s, c in r.items():
                j = oi.get(s)
                if j is not None:
                    A[i, j] = c
        return kernels.kernel_combination(A, N, F)
    R, _ = kernels.rref(N, F)
    return R


def box_slice(I: Ideal, l: int) -> VectorSpaceSlice:
    box = get_box(I.ring, l)
    return VectorSpaceSlice(l, box.polys(box_matrix(I, box)))


def ideal_from_rows(ring, box: Box, R) -> Ideal:
    """The ideal generated by the box polynomials given as echelon rows."""
    if R.shape[0] == 0:
        return Ideal.zero(ring)
    rows = rows_to_dicts(R, box.monomials)
    gb = reduced_groebner(rows, ring.field, ring.key, prereduce=False)
    return Ideal.from_gb(ring, gb)


def truncate(I: Ideal, l: int) -> Ideal:
    """(S_l ∩ I) S."""
    if l < 0:
        raise ValueError("l must be >= 0")
    box = get_box(I.ring, l)
    return ideal_from_rows(I.ring, box, box_matrix(I, box))
