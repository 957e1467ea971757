"""The map phi = u * Phi_e and the ideals it fixes.

``Phi_e`` is the trace map of F_q[x_1..x_d] over its subring of p^e-th powers.
Over a finite field the coefficient field is perfect, so the image of an
ideal J under ``u * Phi_e`` is the e-th root ideal of ``u J``, computed by
splitting every exponent as ``beta = p^e * gamma + alpha`` and pulling the
coefficients back through the inverse Frobenius.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .groebner import NormalForm, reduced_groebner
from .ideals import (
    Ideal,
    bracket_power,
    box_matrix,
    colon,
    get_box,
    ideal_from_rows,
    intersect,
    truncate,
)
from .polyring import Polynomial

__all__ = [
    "CartierMap",
    "InvariantViolation",
    "eth_root_poly",
    "eth_root",
    "apply_phi",
    "is_compatible",
    "is_fixed",
    "hash_op",
    "hash_op_reference",
    "hash_subspace",
    "hash_step_reference",
]

log = logging.getLogger(__name__)


class InvariantViolation(RuntimeError):
    """An internal consistency check failed."""


@dataclass(frozen=True)
class CartierMap:
    """phi = u * Phi_e on the ring of ``u``."""

    u: Polynomial
    e: int = 1

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("e must be >= 1")

    @property
    def ring(self):
        return self.u.ring

    @cached_property
    def pe(self) -> int:
        return self.ring.field.p ** self.e

    @cached_property
    def De(self) -> int:
        """ceil(||u|| / (p^e - 1)); 0 for u = 0."""
        if not self.u:
            return 0
        return -(-self.u.norm() // (self.pe - 1))

    def __str__(self):
        return f"({self.u})*Phi_{self.e}"


def eth_root_poly(g: Polynomial, e: int) -> Ideal:
    """I_e(g): the ideal generated by the components g_alpha of
    ``g = sum_alpha g_alpha^(p^e) x^alpha`` with ``0 <= alpha_i < p^e``."""
    ring = g.ring
    return Ideal(ring, [Polynomial(ring, t) for t in _root_components(g.terms, ring.field, e)])


def _root_components(terms, F, e):
    pe = F.p**e
    comps = {}
    for beta, c in terms.items():
        gamma = []
        alpha = []
        for b in beta:
            q, r = divmod(b, pe)
            gamma.append(q)
            alpha.append(r)
        comps.setdefault(tuple(alpha), {})[tuple(gamma)] = F.inv_frobenius(c, e)
    return list(comps.values())


def eth_root(J: Ideal, e: int) -> Ideal:
    """I_e(J), the smallest ideal whose p^e-th bracket power contains J."""
    ring = J.ring
    gens = []
    for g in J.gens:
        gens.extend(_root_components(g.terms, ring.field, e))
    return Ideal(ring, [Polynomial(ring, t) for t in gens])


def _u_times(phi: CartierMap, J: Ideal):
    # generators of u J, drawn from the reduced basis (usually the shortest list)
    return [phi.u * g for g in J.gb]


def apply_phi(phi: CartierMap, J: Ideal) -> Ideal:
    """phi(F_*^e J) = I_e(u J)."""
    if J.is_zero() or not phi.u:
        return Ideal.zero(J.ring)
    return eth_root(Ideal(J.ring, _u_times(phi, J)), phi.e)


def is_compatible(phi: CartierMap, J: Ideal) -> bool:
    return J.contains(apply_phi(phi, J))


def is_fixed(phi: CartierMap, J: Ideal) -> bool:
    return apply_phi(phi, J) == J


# -- the hash operation --------------------------------------------------------------


@dataclass
class HashStats:
    calls: int = 0
    iterations: int = 0

    def as_dict(self):
        return {"hash_calls": self.calls, "hash_iterations": self.iterations}


def _restrict(B, support_forms, F):
    """Rows of the subspace spanned by ``B`` killed by a linear map.

    ``support_forms`` maps each box column of ``B`` to its image (a term dict).
    """
    cols = [j for j in range(B.shape[1]) if j in support_forms]
    images = [support_forms[j] for j in cols]
    targets = sorted({s for r in images for s in r})
    if not targets:
        return B
    ti = {s: k for k, s in enumerate(targets)}
    N = np.zeros((len(cols), len(targets)), dtype=np.int64)
    for i, r in enumerate(images):
        for s, c in r.items():
            N[i, ti[s]] = c
    A = kernels.matmul(B[:, cols], N, F)
    return kernels.kernel_combination(A, B, F)


def _support(B):
    return np.flatnonzero(B.any(axis=0))


def _root_ideal(phi: CartierMap, J: Ideal) -> Ideal:
    ring = J.ring
    F = ring.field
    gens = []
    for g in _u_times(phi, J):
        gens.extend(_root_components(g.terms, F, phi.e))
    return Ideal.from_gb(ring, reduced_groebner(gens, F, ring.key))


class _ColonPlan:
    """Root-component decomposition of u * m for every monomial m of a box.

    Entry ``i`` says that ``u * box[j[i]]`` has ``c[i] * gammas[g[i]]`` in its
    component ``alpha`` number ``a[i]`` (coefficients already pulled back
    through the inverse Frobenius).  Depends only on u, e and the box.
    """

    def __init__(self, phi: CartierMap, box):
        F = phi.ring.field
        pe = phi.pe
        alphas = {}
        gammas = {}
        rows = []
        for j, m in enumerate(box.monomials):
            for n, c in phi.u.terms.items():
                alpha = []
                gamma = []
                for x, y in zip(m, n):
                    q, r = divmod(x + y, pe)
                    gamma.append(q)
                    alpha.append(r)
                ai = alphas.setdefault(tuple(alpha), len(alphas))
                gi = gammas.setdefault(tuple(gamma), len(gammas))
                rows.append((ai, j, gi, F.inv_frobenius(c, phi.e)))
        rows.sort()
        arr = np.array(rows, dtype=np.int64).reshape(-1, 4)
        self.a, self.j, self.g, self.c = (np.ascontiguousarray(arr[:, i]) for i in range(4))
        self.gammas = list(gammas)
        self.nalpha = len(alphas)


_PLANS: dict = {}


def _colon_plan(phi, box):
    key = (phi, box.l)
    plan = _PLANS.get(key)
    if plan is None:
        if len(_PLANS) > 16:
            _PLANS.clear()
        plan = _PLANS[key] = _ColonPlan(phi, box)
    return plan


def _restrict_colon(phi: CartierMap, K: Ideal, B, box):
    """Rows of span(B) inside (K^[p^e] : u).

    Uses ``u f ∈ K^[p^e]`` iff every root component ``(u f)_alpha`` lies in K
    (S is free over S^(p^e) on the monomials x^alpha, 0 <= alpha_i < p^e), so
    only small monomials are reduced, and modulo K itself.
    """
    F = K.ring.field
    if F.f > 1:
        return _restrict_colon_semilinear(phi, K, B, box)
    plan = _colon_plan(phi, box)
    nfk = K.normal_form()
    insupp = B.any(axis=0)
    used = np.zeros(len(plan.gammas), dtype=bool)
    used[plan.g[insupp[plan.j]]] = True
    std = {}
    indptr = np.zeros(len(plan.gammas) + 1, dtype=np.int64)
    indices = []
    vals = []
    for g in range(len(plan.gammas)):
        if used[g]:
            for s_, v in nfk.monomial(plan.gammas[g]).items():
                indices.append(std.setdefault(s_, len(std)))
                vals.append(v)
        indptr[g + 1] = len(indices)
    if not std:
        return B
    A = kernels.component_matrix(
        B, plan.a, plan.j, plan.g, plan.c, indptr,
        np.array(indices, dtype=np.int64), np.array(vals, dtype=np.int64),
        plan.nalpha * len(std), F.p,
    )
    if A.shape[1] == 0:
        return B
    return kernels.kernel_combination(A, B, F)


def _restrict_colon_semilinear(phi: CartierMap, K: Ideal, B, box):
    # Extension fields.  Component extraction pulls coefficients back through
    # the inverse Frobenius, so f -> ((uf)_alpha) is semilinear; its kernel is
    # computed on twisted rows and pushed forward with the Frobenius.
    ring = K.ring
    F = ring.field
    pe = phi.pe
    nfk = K.normal_form()
    forms = {}
    for j in _support(B):
        m = box.monomials[j]
        img = {}
        for n, c in phi.u.terms.items():
            alpha = []
            gamma = []
            for a, b in zip(m, n):
                q, r = divmod(a + b, pe)
                gamma.append(q)
                alpha.append(r)
            c = F.inv_frobenius(c, phi.e)
            for s, v in nfk.monomial(tuple(gamma)).items():
                key = (tuple(alpha), s)
                w = F.add(img.get(key, 0), F.mul(c, v))
                if w:
                    img[key] = w
                else:
                    img.pop(key, None)
        forms[j] = img
    tw = B.copy()
    tw[tw != 0] = [F.inv_frobenius(int(c), phi.e) for c in tw[tw != 0]]
    R = _restrict(tw, forms, F).copy()
    R[R != 0] = [F.frobenius(int(c), phi.e) for c in R[R != 0]]
    return kernels.rref(R, F)[0]


def _hash_restrict(phi: CartierMap, K: Ideal, B, box):
    """Rows spanning span(B) ∩ (K^[p^e] : u) ∩ I_e(u K)."""
    F = K.ring.field
    B = _restrict_colon(phi, K, B, box)
    if B.shape[0] == 0:
        return B
    root = _root_ideal(phi, K)
    if not root.is_unit():
        rnf = root.normal_form()
        B = _restrict(B, {j: rnf.monomial(box.monomials[j]) for j in _support(B)}, F)
    return B


def hash_op(phi: CartierMap, J: Ideal, stats: HashStats | None = None, known=None) -> Ideal:
    """J^#: the greatest phi-fixed ideal contained in J.

    Iterates ``J_{i+1} = (J_i ∩ (J_i^[p^e] : u) ∩ I_e(u J_i) ∩ S_D) S`` until
    it stabilises.  Each intersection is taken inside the finite-dimensional
    space S_D, where membership in J_i, in the colon ideal (``u f`` reduces to
    zero modulo ``J_i^[p^e]``) and in the root ideal are linear conditions.

    ``known`` may hold canonical keys of ideals already known to be fixed;
    the iteration stops as soon as it reaches one, since a fixed ideal is
    left unchanged by every further step.
    """
    ring = J.ring
    if stats is not None:
        stats.calls += 1
    if J.is_zero() or not phi.u:
        return Ideal.zero(ring)
    box = get_box(ring, phi.De)
    cur = J
    # J_i for i >= 1 is generated inside S_D
    in_box = all(g.norm() <= phi.De for g in J.gens)
    prev_dim = None
    for _ in range(len(box) + 1):
        if stats is not None:
            stats.iterations += 1
        if known is not None and cur.key in known:
            return cur
        B = box_matrix(cur, box)
        k = B.shape[0]
        if prev_dim is not None and k > prev_dim:
            raise InvariantViolation("hash iteration increased the ideal")
        prev_dim = k
        if k == 0:
            return Ideal.zero(ring)
        B = _hash_restrict(phi, cur, B, box)
        if B.shape[0] == k and in_box:
            # nothing removed from J_i ∩ S_D, which generates J_i
            return cur
        nxt = ideal_from_rows(ring, box, B)
        if nxt == cur:
            return cur
        cur = nxt
        in_box = True
    raise InvariantViolation(f"hash iteration did not stabilise within {len(box) + 1} steps")


def hash_subspace(phi: CartierMap, B, stats: HashStats | None = None):
    """Largest subspace W of span(B) with W ⊆ (K^[p^e] : u) ∩ I_e(uK), K = WS.

    ``B`` holds echelon rows over the monomials of S_D.  The ideal generated
    by the result is fixed, and it contains every fixed ideal J whose part
    J ∩ S_D lies in span(B).  The iteration stays inside span(B) instead of
    passing to (B)S ∩ S_D, which is what lets a search over subspaces descend
    even when a hyperplane still generates the whole ideal.
    """
    ring = phi.ring
    box = get_box(ring, phi.De)
    if stats is not None:
        stats.calls += 1
    if not phi.u:
        return B[:0]
    for _ in range(len(box) + 1):
        if stats is not None:
            stats.iterations += 1
        k = B.shape[0]
        if k == 0:
            return B
        B2 = _hash_restrict(phi, ideal_from_rows(ring, box, B), B, box)
        if B2.shape[0] == k:
            return B
        B = B2
    raise InvariantViolation(f"subspace iteration did not stabilise within {len(box) + 1} steps")


# -- reference implementation from the generic ideal operations ------------------------


def hash_step_reference(phi: CartierMap, J: Ideal) -> Ideal:
    """One step J -> (J ∩ (J^[p^e] : u) ∩ I_e(uJ) ∩ S_D) S via generic ideal algebra."""
    ring = J.ring
    if J.is_zero() or not phi.u:
        return Ideal.zero(ring)
    col = colon(bracket_power(J, phi.pe), phi.u)
    K = intersect(intersect(J, col), apply_phi(phi, J))
    return truncate(K, phi.De)


def hash_op_reference(phi: CartierMap, J: Ideal) -> Ideal:
    cur = J
    for _ in range(get_box(J.ring, phi.De).__len__() + 2):
        nxt = hash_step_reference(phi, cur)
        if nxt == cur:
            return cur
        cur = nxt
    raise InvariantViolation("reference hash iteration did not stabilise")
