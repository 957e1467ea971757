"""Buchberger's algorithm and normal forms on raw term dictionaries.

Everything here works on ``{exponent tuple: field int}`` dictionaries so the
inner loops avoid object overhead; :mod:`fpure.ideals` wraps the results.
"""

from __future__ import annotations

import heapq
import itertools

import numpy as np

from . import kernels

__all__ = ["reduced_groebner", "reduce_terms", "NormalForm", "linear_echelon"]


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


class _Keys:
    """Cache of min-heap keys (negated order keys) per monomial."""

    __slots__ = ("key", "cache")

    def __init__(self, key):
        self.key = key
        self.cache = {}

    def rkey(self, m):
        k = self.cache.get(m)
        if k is None:
            k = tuple(-x for x in self.key(m))
            self.cache[m] = k
        return k


_KEY_CACHES = {}


def _keys_for(key):
    kc = _KEY_CACHES.get(key)
    if kc is None:
        if len(_KEY_CACHES) > 64:
            _KEY_CACHES.clear()
        kc = _KEY_CACHES[key] = _Keys(key)
    return kc


def _tail(terms, lm):
    return [(m, c) for m, c in terms.items() if m != lm]


def reduce_terms(f, basis, F, key):
    """Full reduction of ``f`` by monic ``basis`` entries ``(lm, tail)``.

    Returns the remainder, in which no term is divisible by any ``lm``.
    """
    if not f or not basis:
        return dict(f)
    rkey = _keys_for(key).rkey
    p = F.p if F.f == 1 else 0
    f = dict(f)
    heap = [(rkey(m), m) for m in f]
    heapq.heapify(heap)
    queued = set(f)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = f.pop(m, 0)
        if not c:
            continue
        for lm, tail in basis:
            if _divides(lm, m):
                break
        else:
            rem[m] = c
            continue
        t = tuple(x - y for x, y in zip(m, lm))
        for n, cn in tail:
            mn = tuple(x + y for x, y in zip(t, n))
            if p:
                v = (f.get(mn, 0) - c * cn) % p
            else:
                v = F.sub(f.get(mn, 0), F.mul(c, cn))
            if v:
                f[mn] = v
                if mn not in queued:
                    queued.add(mn)
                    heapq.heappush(heap, (rkey(mn), mn))
            else:
                f.pop(mn, None)
    return rem


def _monic(f, lm, F):
    c = f[lm]
    if c == 1:
        return f
    ci = F.inv(c)
    return {m: F.mul(v, ci) for m, v in f.items()}


def linear_echelon(polys, F, key):
    """Reduced row echelon form of the coefficient matrix of ``polys``.

    Columns are ordered by decreasing monomial, so the result has distinct
    leading monomials and is monic.
    """
    polys = [f for f in polys if f]
    if len(polys) <= 1:
        return [_monic(f, max(f, key=key), F) for f in polys]
    mons = sorted(set().union(*polys), key=key, reverse=True)
    index = {m: i for i, m in enumerate(mons)}
    M = np.zeros((len(polys), len(mons)), dtype=np.int64)
    for r, f in enumerate(polys):
        for m, c in f.items():
            M[r, index[m]] = c
    R, _ = kernels.rref(M, F)
    return rows_to_dicts(R, mons)


def rows_to_dicts(R, mons):
    out = []
    for row in R:
        nz = np.flatnonzero(row)
        out.append({mons[j]: int(row[j]) for j in nz})
    return [f for f in out if f]


class _Basis:
    __slots__ = ("lm", "terms", "tail", "sugar")

    def __init__(self, lm, terms, sugar):
        self.lm = lm
        self.terms = terms
        self.tail = _tail(terms, lm)
        self.sugar = sugar


def _spoly(a: _Basis, b: _Basis, lcm, F):
    ta = tuple(x - y for x, y in zip(lcm, a.lm))
    tb = tuple(x - y for x, y in zip(lcm, b.lm))
    out = {}
    for n, c in a.tail:
        out[tuple(x + y for x, y in zip(n, ta))] = c
    for n, c in b.tail:
        m = tuple(x + y for x, y in zip(n, tb))
        v = F.sub(out.get(m, 0), c)
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def reduced_groebner(polys, F, key, known=(), prereduce=True, stats=None):
    """Reduced Gröbner basis of the ideal generated by ``polys`` and ``known``.

    ``known`` must already be a Gröbner basis (not necessarily reduced); the
    S-pairs among its members are skipped.  Input polynomials are fed to the
    pair queue as degree-ordered generators, so inputs that fall in the ideal
    of earlier ones are discarded after a single reduction.

    Returns monic term dictionaries sorted by decreasing leading monomial.
    """
    polys = [f for f in polys if f]
    known = [f for f in known if f]
    if prereduce and len(polys) > 1:
        polys = linear_echelon(polys, F, key)
    basis: list[_Basis] = []
    active: list[int] = []
    pairs = {}  # pid -> (i, j, lcm)
    queue = []
    counter = itertools.count()

    def deg(m):
        return sum(m)

    def add_element(f, sugar, with_pairs=True):
        lm = max(f, key=key)
        f = _monic(f, lm, F)
        h = len(basis)
        b = _Basis(lm, f, sugar)
        basis.append(b)
        if with_pairs:
            _update(h, b)
        else:
            # caller guarantees pairs among known elements reduce to zero
            if any(_divides(basis[g].lm, lm) for g in active):
                return
            active[:] = [g for g in active if not _divides(lm, basis[g].lm)]
            active.append(h)
        return b

    def _update(h, b):
        lmh = b.lm
        cand = [(g, _lcm(lmh, basis[g].lm)) for g in active]
        kept = []
        for idx, (g, l) in enumerate(cand):
            if _coprime(lmh, basis[g].lm):
                kept.append((g, l, True))
                continue
            dominated = False
            for g2, l2 in cand[idx + 1:]:
                if _divides(l2, l):
                    dominated = True
                    break
            if not dominated:
                for g2, l2, _ in kept:
                    if _divides(l2, l):
                        dominated = True
                        break
            if not dominated:
                kept.append((g, l, False))
        # prune old pairs (chain criterion)
        for pid in list(pairs):
            i, j, l = pairs[pid]
            if _divides(lmh, l) and _lcm(basis[i].lm, lmh) != l and _lcm(basis[j].lm, lmh) != l:
                del pairs[pid]
        for g, l, coprime in kept:
            if coprime:
                continue
            gb = basis[g]
            sugar = max(b.sugar + deg(l) - deg(lmh), gb.sugar + deg(l) - deg(gb.lm))
            pid = next(counter)
            pairs[pid] = (g, h, l)
            heapq.heappush(queue, (sugar, key(l), pid, None))
        active[:] = [g for g in active if not _divides(lmh, basis[g].lm)]
        active.append(h)

    for f in known:
        add_element(dict(f), max(deg(m) for m in f), with_pairs=False)
        if len(basis[-1].terms) == 1 and not any(basis[-1].lm):
            return [{basis[-1].lm: 1}]
    for f in polys:
        lm = max(f, key=key)
        heapq.heappush(queue, (max(deg(m) for m in f), key(lm), next(counter), f))

    def reducers():
        return [(basis[g].lm, basis[g].tail) for g in active]

    red = reducers()
    dirty = False
    while queue:
        sugar, _, pid, gen = heapq.heappop(queue)
        if gen is None:
            if pid not in pairs:
                continue
            i, j, l = pairs.pop(pid)
            f = _spoly(basis[i], basis[j], l, F)
        else:
            f = gen
        if dirty:
            red = reducers()
            dirty = False
        r = reduce_terms(f, red, F, key)
        if stats is not None:
            stats["reductions"] = stats.get("reductions", 0) + 1
        if not r:
            continue
        if all(not any(m) for m in r):
            return [{next(iter(r)): 1}]
        add_element(r, sugar)
        dirty = True

    # interreduce the minimal basis
    result = []
    elems = [basis[g] for g in active]
    for b in elems:
        others = [(o.lm, o.tail) for o in elems if o is not b]
        tail = reduce_terms(dict(b.tail), others, F, key)
        tail[b.lm] = 1
        result.append((b.lm, tail))
    result.sort(key=lambda t: key(t[0]), reverse=True)
    return [t for _, t in result]


class NormalForm:
    """Normal forms modulo a fixed Gröbner basis, memoised per monomial.

    ``monomial(m)`` expands ``m`` through one reduction step and recurses on
    the (strictly smaller) resulting monomials, so computing the normal forms
    of many related monomials shares work.
    """

    def __init__(self, gb, F, key):
        self.F = F
        self.key = key
        self.basis = []
        for g in gb:
            lm = max(g, key=key)
            g = _monic(g, lm, F)
            self.basis.append((lm, _tail(g, lm)))
        self.memo = {}

    def divisor(self, m):
        for lm, tail in self.basis:
            if _divides(lm, m):
                return lm, tail
        return None

    def is_standard(self, m) -> bool:
        return self.divisor(m) is None

    def monomial(self, m):
        memo = self.memo
        r = memo.get(m)
        if r is not None:
            return r
        F = self.F
        p = F.p if F.f == 1 else 0
        stack = [m]
        while stack:
            x = stack[-1]
            if x in memo:
                stack.pop()
                continue
            d = self.divisor(x)
            if d is None:
                memo[x] = {x: 1}
                stack.pop()
                continue
            lm, tail = d
            t = tuple(a - b for a, b in zip(x, lm))
            deps = [(tuple(a + b for a, b in zip(t, n)), c) for n, c in tail]
            missing = [y for y, _ in deps if y not in memo]
            if missing:
                stack.extend(missing)
                continue
            out = {}
            for y, c in deps:
                for s, v in memo[y].items():
                    if p:
                        w = (out.get(s, 0) - c * v) % p
                    else:
                        w = F.sub(out.get(s, 0), F.mul(c, v))
                    if w:
                        out[s] = w
                    else:
                        out.pop(s, None)
            memo[x] = out
            stack.pop()
        return memo[m]

    def poly(self, f):
        F = self.F
        p = F.p if F.f == 1 else 0
        out = {}
        for m, c in f.items():
            for s, v in self.monomial(m).items():
                if p:
                    w = (out.get(s, 0) + c * v) % p
                else:
                    w = F.add(out.get(s, 0), F.mul(c, v))
                if w:
                    out[s] = w
                else:
                    out.pop(s, None)
        return out
