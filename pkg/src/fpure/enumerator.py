"""Enumeration of all phi-fixed ideals.

Starting from the whole ring, every node replaces its ideal ``I`` by the
greatest fixed ideal ``I^#`` inside it, records it, and branches on the
ideals ``V`` with ``mI^# ⊆ V ⊆ I^#`` and ``dim I^#/V = 1``.  When u is
homogeneous every fixed ideal is homogeneous, so any fixed ideal strictly
inside a fixed ideal ``I`` lies in one of those ``V`` and the search tree
reaches all of them; repeated ``I^#`` are pruned.  Inhomogeneous u are
handled by homogenising first.
"""

from __future__ import annotations

import itertools
import json
import logging
import time
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .cartier import CartierMap, HashStats, InvariantViolation, hash_op, hash_subspace, is_fixed
from .groebner import reduced_groebner
from . import kernels
from .ideals import Ideal, _nakayama_basis, get_box, ideal_from_rows, maximal_ideal
from .polyring import Polynomial, PolynomialRing

__all__ = [
    "Hyperplane",
    "hyperplanes",
    "branch_ideals",
    "Limits",
    "LimitExceeded",
    "FixedIdealSet",
    "enumerate_fixed",
    "brute_force_fixed",
    "count_subspaces",
    "hyperplane_subspaces",
    "is_homogeneous",
    "homogenize",
    "dehomogenize",
]

log = logging.getLogger(__name__)

DEFAULT_MAX_NODES = 10**6


@dataclass(frozen=True, order=True)
class Hyperplane:
    """Normalised covector (first nonzero entry 1) cutting out a hyperplane of F_q^s."""

    covector: tuple

    def __post_init__(self):
        nz = [c for c in self.covector if c]
        if not nz or nz[0] != 1:
            raise ValueError("covector must be nonzero with first nonzero entry 1")

    @property
    def lead(self) -> int:
        return next(i for i, c in enumerate(self.covector) if c)


def hyperplanes(q: int, s: int):
    """All hyperplanes of F_q^s, in lexicographic order of covectors.

    Field elements are the integers ``0..q-1`` of :class:`~fpure.ffield.FieldSpec`,
    with 1 the multiplicative identity.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    out = []
    for lead in range(s - 1, -1, -1):
        for tail in itertools.product(range(q), repeat=s - 1 - lead):
            out.append(Hyperplane((0,) * lead + (1,) + tail))
    out.sort()
    return out


def branch_ideals(I: Ideal, mI: Optional[Ideal] = None):
    """The ideals V with mI ⊆ V ⊆ I and dim_K I/V = 1.

    For ``I`` not contained in m, ``I/mI`` is one-dimensional and the only
    branch is ``mI``; the same happens for principal ``I``.
    """
    ring = I.ring
    if I.is_zero():
        raise ValueError("the zero ideal has no branches")
    if mI is None:
        mI = maximal_ideal(ring) * I
    if not I.in_maximal_ideal():
        return [mI]
    gens = _nakayama_basis(I, mI)
    s = len(gens)
    if s == 1:
        return [mI]
    F = ring.field
    known = [g.terms for g in mI.gb]
    out = []
    for h in hyperplanes(F.q, s):
        c = h.covector
        j = h.lead
        new = []
        for i in range(s):
            if i == j:
                continue
            # g_i - c_i g_j is killed by the covector
            new.append((gens[i] - gens[j].scale(c[i])).terms if c[i] else gens[i].terms)
        gb = reduced_groebner(new, F, ring.key, known=known)
        out.append(Ideal.from_gb(ring, gb))
    return out


def hyperplane_subspaces(B, F) -> list:
    """Echelon row matrices of every hyperplane of the row space of ``B``."""
    k = B.shape[0]
    if k <= 1:
        return [B[:0]]
    out = []
    for h in hyperplanes(F.q, k):
        c = h.covector
        j = h.lead
        K = np.zeros((k - 1, k), dtype=np.int64)
        for r, i in enumerate(x for x in range(k) if x != j):
            K[r, i] = 1
            K[r, j] = F.neg(c[i])
        R, _ = kernels.rref(kernels.matmul(K, B, F), F)
        out.append(R)
    return out


def is_homogeneous(f) -> bool:
    return len({sum(m) for m in f.terms}) <= 1


def homogenize(f: Polynomial, ring: PolynomialRing) -> Polynomial:
    """f homogenised with the last variable of ``ring`` (one more than f's ring)."""
    if not f:
        return ring.zero
    deg = f.degree()
    return Polynomial(ring, {m + (deg - sum(m),): c for m, c in f.terms.items()})


def dehomogenize(J: Ideal, ring: PolynomialRing) -> Ideal:
    """The image of J under setting its ring's last variable to 1."""
    gens = []
    for g in J.gb:
        t = {}
        for m, c in g.terms.items():
            k = m[:-1]
            v = ring.field.add(t.get(k, 0), c)
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        gens.append(Polynomial(ring, t))
    return Ideal(ring, gens)


def _homogenizing_ring(ring: PolynomialRing) -> PolynomialRing:
    taken = set(ring.variables) | {"z"}
    name = next(n for n in itertools.chain(["t", "h", "w"], (f"t{i}" for i in itertools.count()))
                if n not in taken)
    return PolynomialRing(ring.field, ring.variables + (name,))


STRATEGIES = ("auto", "nakayama", "homogenize", "box")


@dataclass
class Limits:
    max_nodes: Optional[int] = DEFAULT_MAX_NODES
    max_seconds: Optional[float] = None


class FixedIdealSet:
    """Fixed ideals keyed by reduced Gröbner basis, with search statistics."""

    def __init__(self, phi: CartierMap, ideals: Iterable[Ideal] = (), stats=None, complete=True):
        self.phi = phi
        self._ideals = {}
        for I in ideals:
            self.add(I)
        self.stats = dict(stats or {})
        self.complete = complete

    def add(self, I: Ideal) -> bool:
        if I.key in self._ideals:
            return False
        self._ideals[I.key] = I
        return True

    def __len__(self):
        return len(self._ideals)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, I):
        return I.key in self._ideals

    def __eq__(self, other):
        if not isinstance(other, FixedIdealSet):
            return NotImplemented
        return set(self._ideals) == set(other._ideals)

    def keys(self):
        return set(self._ideals)

    def sorted(self):
        """Deterministic order: unit ideal first, then by generator count and strings, zero last."""

        def order(I):
            if I.is_zero():
                return (2, 0, [])
            if I.is_unit():
                return (0, 0, [])
            return (1, len(I.gb), I.generator_strings())

        return sorted(self._ideals.values(), key=order)

    def nonzero_proper(self):
        return [I for I in self.sorted() if not I.is_zero() and not I.is_unit()]

    def to_json(self):
        ring = self.phi.ring
        return {
            "field": str(ring.field),
            "vars": list(ring.variables),
            "u": str(self.phi.u),
            "e": self.phi.e,
            "ideals": [I.generator_strings() for I in self.sorted()],
            "count": len(self),
            "stats": self.stats,
            "complete": self.complete,
        }


class LimitExceeded(RuntimeError):
    """Search budget exhausted; ``partial`` holds what was found so far."""

    def __init__(self, message, partial: FixedIdealSet):
        super().__init__(message)
        self.partial = partial


def _rows_key(B):
    return (B.shape, B.tobytes())


class _IdealSearch:
    """Nodes are ideals; below a fixed ideal I branch on the hyperplanes of I/mI."""

    def __init__(self, phi):
        self.phi = phi
        self.m = maximal_ideal(phi.ring)

    def root(self):
        return Ideal.unit(self.phi.ring)

    def input_key(self, V):
        return V.key

    def describe(self, V):
        return V.generator_strings()

    def solve(self, V, hs, known=None):
        H = hash_op(self.phi, V, hs, known)
        return H.key, H, H

    def children(self, H):
        return branch_ideals(H, self.m * H)


class _SubspaceSearch:
    """Nodes are subspaces of S_D; below a stable subspace branch on its hyperplanes."""

    def __init__(self, phi):
        self.phi = phi
        self.box = get_box(phi.ring, phi.De)

    def root(self):
        return np.eye(len(self.box), dtype=np.int64)

    def input_key(self, B):
        return _rows_key(B)

    def describe(self, B):
        return sorted(str(f) for f in self.box.polys(B))

    def solve(self, B, hs, known=None):
        W = hash_subspace(self.phi, B, hs)
        return _rows_key(W), ideal_from_rows(self.phi.ring, self.box, W), W

    def children(self, W):
        return hyperplane_subspaces(W, self.phi.ring.field)


def _solve_job(args):
    search, item, known = args
    st = HashStats()
    return search.solve(item, st, known), st


def enumerate_fixed(
    phi: CartierMap,
    limits: Optional[Limits] = None,
    trace=None,
    jobs: int = 1,
    check: bool = True,
    strategy: str = "auto",
) -> FixedIdealSet:
    """All phi-fixed ideals of the ring of ``phi.u``.

    ``strategy`` picks the branching rule below each fixed ideal I:
    ``"nakayama"`` branches on the hyperplanes of I/mI, which reaches every
    fixed ideal when u is homogeneous (all fixed ideals are then homogeneous
    and graded Nakayama applies) but can miss fixed ideals not contained in m
    otherwise.  ``"homogenize"`` runs the hyperplane search for the
    homogenisation u' of u in one more variable t and sets t = 1 in the
    results; it is complete for every u (see :func:`_enumerate_homogenized`).
    ``"box"`` searches the subspaces W of S_D that generate fixed ideals,
    branching on the hyperplanes of W; it is also complete, but the branching
    factor grows like q^dim W, so it is only usable on tiny boxes.
    ``"auto"`` picks ``"nakayama"`` for homogeneous u and ``"homogenize"``
    otherwise.

    ``trace`` is an optional text stream receiving one JSON object per search
    event.  ``jobs > 1`` evaluates sibling nodes in worker processes; the
    result does not depend on it.  With ``check`` every emitted ideal is
    verified to be fixed.
    """
    limits = limits or Limits()
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "auto":
        strategy = "nakayama" if is_homogeneous(phi.u) else "homogenize"
    if strategy == "homogenize":
        return _enumerate_homogenized(phi, limits, trace, jobs, check)
    ring = phi.ring
    t0 = time.monotonic()
    hs = HashStats()
    stats = {"nodes": 0, "distinct_inputs": 0, "max_depth": 0, "strategy": strategy}
    result = FixedIdealSet(phi)
    result.stats = stats

    def emit(event, **kw):
        if trace is not None:
            trace.write(json.dumps({"event": event, **kw}, sort_keys=True) + "\n")

    def finish(complete):
        stats["distinct_inputs"] = len(seen_inputs)
        stats.update(hs.as_dict())
        stats["fixed_ideals"] = len(result)
        stats["seconds"] = round(time.monotonic() - t0, 3)
        result.complete = complete
        return result

    seen_inputs = set()
    # the zero ideal is fixed by every phi
    result.add(Ideal.zero(ring))
    if not phi.u:
        return finish(True)

    search = _IdealSearch(phi) if strategy == "nakayama" else _SubspaceSearch(phi)
    depth_bound = len(get_box(ring, phi.De))
    seen_outputs = set()
    # canonical keys of the fixed ideals found so far
    fixed_keys = set()
    frontier = deque([(search.root(), 0)])
    pool = None
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        pool = ProcessPoolExecutor(max_workers=jobs)
    try:
        while frontier:
            batch = []
            while frontier and len(batch) < max(jobs, 1) * 4:
                item, depth = frontier.popleft()
                k = search.input_key(item)
                if k in seen_inputs:
                    continue
                seen_inputs.add(k)
                stats["nodes"] += 1
                if limits.max_nodes is not None and stats["nodes"] > limits.max_nodes:
                    raise LimitExceeded(f"node budget {limits.max_nodes} exhausted", finish(False))
                batch.append((item, depth))
            if pool is not None and len(batch) > 1:
                solved = []
                for (res, st) in pool.map(_solve_job, [(search, item, fixed_keys) for item, _ in batch]):
                    hs.calls += st.calls
                    hs.iterations += st.iterations
                    solved.append(res)
            else:
                solved = [search.solve(item, hs, fixed_keys) for item, _ in batch]
            for (item, depth), (okey, H, state) in zip(batch, solved):
                if limits.max_seconds is not None and time.monotonic() - t0 > limits.max_seconds:
                    raise LimitExceeded(f"time budget {limits.max_seconds}s exhausted", finish(False))
                new = okey not in seen_outputs
                emit("node", depth=depth, input=search.describe(item),
                     result=H.generator_strings(), new=new)
                if not new:
                    continue
                seen_outputs.add(okey)
                if check and not is_fixed(phi, H):
                    raise InvariantViolation(f"hash output {H} is not fixed")
                result.add(H)
                fixed_keys.add(H.key)
                stats["max_depth"] = max(stats["max_depth"], depth)
                if depth > depth_bound:
                    raise InvariantViolation(f"search depth {depth} exceeds {depth_bound}")
                if H.is_zero():
                    continue
                children = search.children(state)
                emit("branch", depth=depth, count=len(children))
                for W in children:
                    if search.input_key(W) not in seen_inputs:
                        frontier.append((W, depth + 1))
    finally:
        if pool is not None:
            pool.shutdown()
    return finish(True)


def _enumerate_homogenized(phi, limits, trace, jobs, check) -> FixedIdealSet:
    """Fixed ideals of u Phi_e read off from those of u' Phi_e, u' = homogenised u.

    For a homogeneous G the root components are indexed by alpha alone: the
    t-exponent of a component is forced to be deg G - |alpha| modulo p^e.
    Hence setting t = 1 commutes with I_e on homogeneous ideals, and the
    dehomogenisation of a u'-fixed ideal is u-fixed.  Conversely, for a
    u-fixed J the homogenisation J^h is u'-compatible with dehomogenisation
    J; the descending images of J^h under u' Phi_e stabilise at a u'-fixed
    ideal, still homogeneous with dehomogenisation J.  As u' is homogeneous
    the hyperplane search finds every u'-fixed ideal.
    """
    ring = phi.ring
    hring = _homogenizing_ring(ring)
    hphi = CartierMap(homogenize(phi.u, hring), phi.e)

    def translate(inner: FixedIdealSet, complete: bool) -> FixedIdealSet:
        out = FixedIdealSet(phi)
        for J in inner:
            D = dehomogenize(J, ring)
            if check and D not in out and not is_fixed(phi, D):
                raise InvariantViolation(f"dehomogenised ideal {D} is not fixed")
            out.add(D)
        out.stats = {**inner.stats, "strategy": "homogenize",
                     "homogeneous_fixed_ideals": len(inner), "fixed_ideals": len(out)}
        out.complete = complete
        return out

    try:
        inner = enumerate_fixed(hphi, limits, trace, jobs, check, strategy="nakayama")
    except LimitExceeded as ex:
        raise LimitExceeded(str(ex), translate(ex.partial, False)) from None
    return translate(inner, True)


# -- exhaustive oracle ----------------------------------------------------------------


def _gauss_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(n: int, q: int) -> int:
    return sum(_gauss_binomial(n, k, q) for k in range(n + 1))


def _rref_matrices(n, k, q):
    """Every k x n reduced row echelon matrix of rank k over {0..q-1}."""
    import numpy as np

    for piv in itertools.combinations(range(n), k):
        pset = set(piv)
        free = [(r, c) for r, p in enumerate(piv) for c in range(p + 1, n) if c not in pset]
        for vals in itertools.product(range(q), repeat=len(free)):
            M = np.zeros((k, n), dtype=np.int64)
            for r, p in enumerate(piv):
                M[r, p] = 1
            for (r, c), v in zip(free, vals):
                M[r, c] = v
            yield M


def brute_force_fixed(phi: CartierMap, max_subspaces: int = 100_000) -> FixedIdealSet:
    """Fixed ideals by testing the ideal generated by every subspace of S_D.

    Every fixed ideal is generated by its elements of norm at most D, so the
    search is complete; it is only feasible when S_D is tiny.
    """
    ring = phi.ring
    if not phi.u:
        return FixedIdealSet(phi, [Ideal.zero(ring)])
    box = get_box(ring, phi.De)
    n = len(box)
    total = count_subspaces(n, ring.field.q)
    if total > max_subspaces:
        raise ValueError(f"{total} subspaces of S_{phi.De} exceed the cap {max_subspaces}")
    out = FixedIdealSet(phi, stats={"subspaces": total})
    seen = set()
    for k in range(n + 1):
        for M in _rref_matrices(n, k, ring.field.q):
            J = ideal_from_rows(ring, box, M)
            if J.key in seen:
                continue
            seen.add(J.key)
            if is_fixed(phi, J):
                out.add(J)
    out.stats["distinct_ideals"] = len(seen)
    return out
