"""Dense Gaussian elimination over F_q.

Two interchangeable back ends implement the elimination inner loop:

* a numba ``@njit`` kernel (default when numba imports), and
* a vectorised pure-numpy path.

Set ``FPURE_NO_NUMBA=1`` in the environment to force the numpy path.  Prime
fields run on modular arithmetic; extension fields go through the lookup
tables of :class:`~fpure.ffield.FieldSpec`.

All matrices are ``int64`` arrays with entries in ``[0, q)``.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba as nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None

__all__ = [
    "BACKEND",
    "component_matrix",
    "eliminate",
    "rref",
    "rank",
    "left_kernel",
    "kernel_combination",
    "matmul",
    "set_backend",
]


def _env_backend():
    if nb is None or os.environ.get("FPURE_NO_NUMBA", "").strip() not in ("", "0"):
        return "numpy"
    return "numba"


BACKEND = _env_backend()


def set_backend(name: str) -> None:
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    if name == "numba" and nb is None:
        raise RuntimeError("numba is not installed")
    BACKEND = name


# -- pure python/numpy reference kernels -----------------------------------------


def _np_eliminate_mod(M, ncols, p):
    nrows = M.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        a = int(M[r, c])
        if a != 1:
            M[r, c:] = M[r, c:] * pow(a, -1, p) % p
        f = M[:, c].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            M[rows, c:] = (M[rows, c:] - f[rows, None] * M[r, c:]) % p
        pivots.append(c)
        r += 1
    return np.array(pivots, dtype=np.int64)


def _np_eliminate_table(M, ncols, add, mul, neg, inv):
    nrows = M.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        a = M[r, c]
        if a != 1:
            M[r, c:] = mul[inv[a], M[r, c:]]
        f = M[:, c].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            M[rows, c:] = add[M[rows, c:], neg[mul[f[rows, None], M[r, c:][None, :]]]]
        pivots.append(c)
        r += 1
    return np.array(pivots, dtype=np.int64)


# -- numba kernels ------------------------------------------------------------------


def _nb_eliminate_mod(M, ncols, p):
    nrows = M.shape[0]
    width = M.shape[1]
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    nzcols = np.empty(width, dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if M[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, width):
                t = M[r, j]
                M[r, j] = M[piv, j]
                M[piv, j] = t
        a = M[r, c]
        if a != 1:
            # a^(p-2) mod p
            ainv = 1
            b = a
            n = p - 2
            while n > 0:
                if n & 1:
                    ainv = ainv * b % p
                b = b * b % p
                n >>= 1
            for j in range(c, width):
                M[r, j] = M[r, j] * ainv % p
        nnz = 0
        for j in range(c, width):
            if M[r, j] != 0:
                nzcols[nnz] = j
                nnz += 1
        for i in range(nrows):
            if i == r:
                continue
            f = M[i, c]
            if f == 0:
                continue
            g = p - f
            for k in range(nnz):
                j = nzcols[k]
                M[i, j] = (M[i, j] + g * M[r, j]) % p
        pivots[r] = c
        r += 1
    return pivots[:r].copy()


def _nb_eliminate_table(M, ncols, add, mul, neg, inv):
    nrows = M.shape[0]
    width = M.shape[1]
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    nzcols = np.empty(width, dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if M[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, width):
                t = M[r, j]
                M[r, j] = M[piv, j]
                M[piv, j] = t
        a = M[r, c]
        if a != 1:
            ainv = inv[a]
            for j in range(c, width):
                M[r, j] = mul[ainv, M[r, j]]
        nnz = 0
        for j in range(c, width):
            if M[r, j] != 0:
                nzcols[nnz] = j
                nnz += 1
        for i in range(nrows):
            if i == r:
                continue
            f = M[i, c]
            if f == 0:
                continue
            g = neg[f]
            for k in range(nnz):
                j = nzcols[k]
                M[i, j] = add[M[i, j], mul[g, M[r, j]]]
        pivots[r] = c
        r += 1
    return pivots[:r].copy()


def _nb_component_matrix(B, ent_a, ent_j, ent_g, ent_c, indptr, indices, vals, width, p):
    k = B.shape[0]
    n = B.shape[1]
    insupp = np.zeros(n, dtype=np.bool_)
    for r in range(k):
        for j in range(n):
            if B[r, j] != 0:
                insupp[j] = True
    # compact the used (alpha, s) columns
    colmap = np.full(width, -1, dtype=np.int64)
    ncol = 0
    S = width // (ent_a.max() + 1) if ent_a.size else 1
    for e in range(ent_j.size):
        if not insupp[ent_j[e]]:
            continue
        base = ent_a[e] * S
        for t in range(indptr[ent_g[e]], indptr[ent_g[e] + 1]):
            col = base + indices[t]
            if colmap[col] < 0:
                colmap[col] = ncol
                ncol += 1
    A = np.zeros((k, ncol), dtype=np.int64)
    for e in range(ent_j.size):
        j = ent_j[e]
        if not insupp[j]:
            continue
        base = ent_a[e] * S
        for t in range(indptr[ent_g[e]], indptr[ent_g[e] + 1]):
            col = colmap[base + indices[t]]
            coef = ent_c[e] * vals[t] % p
            for r in range(k):
                b = B[r, j]
                if b != 0:
                    A[r, col] = (A[r, col] + b * coef) % p
    return A


if nb is not None:
    _jit_eliminate_mod = nb.njit(cache=True, nogil=True)(_nb_eliminate_mod)
    _jit_eliminate_table = nb.njit(cache=True, nogil=True)(_nb_eliminate_table)
    _jit_component_matrix = nb.njit(cache=True, nogil=True)(_nb_component_matrix)
else:  # pragma: no cover
    _jit_eliminate_mod = _jit_eliminate_table = _jit_component_matrix = None


def _np_component_matrix(B, ent_a, ent_j, ent_g, ent_c, indptr, indices, vals, width, p):
    nalpha = int(ent_a.max()) + 1 if ent_a.size else 1
    S = width // nalpha
    NF = np.zeros((indptr.size - 1, S), dtype=np.float64)
    for g in range(indptr.size - 1):
        lo, hi = indptr[g], indptr[g + 1]
        NF[g, indices[lo:hi]] = vals[lo:hi]
    insupp = B.any(axis=0)
    Bf = B.astype(np.float64)
    bounds = np.searchsorted(ent_a, np.arange(nalpha + 1))
    blocks = []
    for t in range(nalpha):
        lo, hi = bounds[t], bounds[t + 1]
        js = ent_j[lo:hi]
        keep = insupp[js]
        if not keep.any():
            continue
        P = Bf[:, js[keep]] * ent_c[lo:hi][keep]
        Ab = np.mod(P @ NF[ent_g[lo:hi][keep]], p)
        used = np.zeros(S, dtype=bool)
        for g in np.unique(ent_g[lo:hi][keep]):
            used[indices[indptr[g]:indptr[g + 1]]] = True
        blocks.append(Ab[:, used])
    if not blocks:
        return np.zeros((B.shape[0], 0), dtype=np.int64)
    return np.concatenate(blocks, axis=1).astype(np.int64)


# -- public API -------------------------------------------------------------------


def eliminate(M, field, ncols=None, backend=None):
    """Reduce ``M`` in place to reduced row echelon form on its first ``ncols`` columns.

    Returns the pivot column indices; rows ``len(pivots):`` are zero on those columns.
    """
    if ncols is None:
        ncols = M.shape[1]
    backend = backend or BACKEND
    if M.shape[0] == 0 or ncols == 0:
        return np.zeros(0, dtype=np.int64)
    if field.is_prime_field:
        fn = _jit_eliminate_mod if backend == "numba" else _np_eliminate_mod
        return fn(M, ncols, field.p)
    fn = _jit_eliminate_table if backend == "numba" else _np_eliminate_table
    return fn(M, ncols, *field.tables)


def rref(A, field, backend=None):
    """Return ``(R, pivots)`` with ``R`` the nonzero rows of the reduced echelon form."""
    M = np.array(A, dtype=np.int64, copy=True)
    if M.ndim != 2:
        raise ValueError("expected a matrix")
    piv = eliminate(M, field, backend=backend)
    return M[: len(piv)], piv


def rank(A, field, backend=None) -> int:
    return len(rref(A, field, backend=backend)[1])


def left_kernel(A, field, backend=None):
    """Basis (as rows) of ``{x : x A = 0}``; shape ``(k, A.shape[0])``."""
    A = np.asarray(A, dtype=np.int64)
    n, c = A.shape
    M = np.zeros((n, c + n), dtype=np.int64)
    M[:, :c] = A
    M[np.arange(n), c + np.arange(n)] = 1
    piv = eliminate(M, field, ncols=c, backend=backend)
    K = M[len(piv):, c:]
    return np.ascontiguousarray(K)


def kernel_combination(A, B, field, backend=None):
    """Echelon basis of ``{x B : x A = 0}``.

    Eliminates on ``[A | B]`` over the columns of ``A``; the rows left with a
    zero ``A`` part carry the combinations.  Cheaper than a left kernel followed
    by a product, since no identity block and no matrix product are needed.
    ``B`` must have independent rows for the result to have full rank.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    n, c = A.shape
    M = np.empty((n, c + B.shape[1]), dtype=np.int64)
    M[:, :c] = A
    M[:, c:] = B
    piv = eliminate(M, field, ncols=c, backend=backend)
    return rref(M[len(piv):, c:], field, backend=backend)[0]


def component_matrix(B, ent_a, ent_j, ent_g, ent_c, indptr, indices, vals, width, p, backend=None):
    """Matrix of the map ``x -> sum_e x B[:, j_e] c_e nf(g_e)`` placed in column block ``a_e``.

    Entries ``e`` must be sorted by ``ent_a``.  The normal forms are given in
    CSR form (``indptr``, ``indices``, ``vals``) over ``width // nalpha``
    standard monomials.  Only columns that can be nonzero are returned, in an
    order that depends on the back end (the kernel of the map does not).
    Prime fields only.
    """
    backend = backend or BACKEND
    fn = _jit_component_matrix if backend == "numba" else _np_component_matrix
    return fn(B, ent_a, ent_j, ent_g, ent_c, indptr, indices, vals, width, p)


def matmul(A, B, field):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if field.is_prime_field:
        p = field.p
        bound = A.shape[1] * (p - 1) ** 2
        if bound < 2**52:
            # exact in double precision, and BLAS is far faster than integer matmul
            C = A.astype(np.float64) @ B.astype(np.float64)
            return C.astype(np.int64) % p
        if bound < 2**62:
            return (A @ B) % p
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in range(A.shape[1]):
            out = (out + A[:, k, None] * B[None, k, :] % p) % p
        return out
    add, mul, _, _ = field.tables
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        col = A[:, k]
        if col.any():
            out = add[out, mul[col[:, None], B[k][None, :]]]
    return out
