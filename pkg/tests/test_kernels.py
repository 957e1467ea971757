import numpy as np
import pytest

from fpure import FieldSpec
from fpure import kernels

F4 = FieldSpec(2, 2, (1, 1, 1))
FIELDS = [FieldSpec(2), FieldSpec(5), FieldSpec(7), F4, FieldSpec(3, 2, (1, 0, 1))]
BACKENDS = ["numba", "numpy"]


def py_rank(A, F):
    """Plain-Python elimination used as an independent oracle."""
    M = [list(map(int, r)) for r in A]
    r = 0
    for c in range(len(M[0]) if M else 0):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, v) for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[r])]
        r += 1
    return r


def random_matrix(rng, F, n, m, density=0.5):
    A = rng.integers(0, F.q, size=(n, m))
    A[rng.random((n, m)) > density] = 0
    return A.astype(np.int64)


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_rref_backends_agree_with_oracle(F):
    rng = np.random.default_rng(F.q)
    for _ in range(25):
        n, m = rng.integers(1, 9, size=2)
        A = random_matrix(rng, F, n, m)
        outs = [kernels.rref(A, F, backend=b) for b in BACKENDS]
        R0, p0 = outs[0]
        for R, p in outs[1:]:
            assert np.array_equal(R, R0) and np.array_equal(p, p0)
        assert len(p0) == py_rank(A, F)
        # reduced echelon: pivot columns are unit vectors
        for i, c in enumerate(p0):
            col = R0[:, c]
            assert col[i] == 1 and np.count_nonzero(col) == 1


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_left_kernel(F):
    rng = np.random.default_rng(100 + F.q)
    for _ in range(20):
        n, m = rng.integers(1, 8, size=2)
        A = random_matrix(rng, F, n, m)
        for b in BACKENDS:
            K = kernels.left_kernel(A, F, backend=b)
            assert K.shape[0] == n - kernels.rank(A, F)
            if K.size:
                assert not kernels.matmul(K, A, F).any()
                assert kernels.rank(K, F) == K.shape[0]


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_matmul_matches_python(F):
    rng = np.random.default_rng(7 * F.q)
    A = random_matrix(rng, F, 4, 6, 1.0)
    B = random_matrix(rng, F, 6, 3, 1.0)
    C = kernels.matmul(A, B, F)
    for i in range(4):
        for j in range(3):
            acc = 0
            for k in range(6):
                acc = F.add(acc, F.mul(int(A[i, k]), int(B[k, j])))
            assert C[i, j] == acc


def test_matmul_large_prime_path():
    F = FieldSpec(1_000_003)
    rng = np.random.default_rng(0)
    A = rng.integers(0, F.p, size=(3, 5))
    B = rng.integers(0, F.p, size=(5, 2))
    expect = [[sum(int(A[i, k]) * int(B[k, j]) for k in range(5)) % F.p for j in range(2)] for i in range(3)]
    assert kernels.matmul(A, B, F).tolist() == expect


def dense_component(B, a, j, g, c, indptr, indices, vals, width, p):
    nstd = width // (max(a) + 1) if len(a) else 1
    out = np.zeros((B.shape[0], width), dtype=np.int64)
    for e in range(len(a)):
        row = np.zeros(width, dtype=np.int64)
        for t in range(indptr[g[e]], indptr[g[e] + 1]):
            row[a[e] * nstd + indices[t]] = vals[t]
        out = (out + np.outer(B[:, j[e]] * c[e] % p, row)) % p
    return out


@pytest.mark.parametrize("p", [2, 3, 5])
def test_component_matrix_kernel_space(p):
    F = FieldSpec(p)
    rng = np.random.default_rng(p)
    for _ in range(30):
        k, n = rng.integers(1, 7), rng.integers(1, 7)
        nalpha, nstd, ngen = rng.integers(1, 4), rng.integers(1, 5), rng.integers(1, 5)
        B = random_matrix(rng, F, k, n, 0.7)
        nent = int(rng.integers(0, 8))
        a = np.sort(rng.integers(0, nalpha, size=nent)).astype(np.int64)
        j = rng.integers(0, n, size=nent).astype(np.int64)
        g = rng.integers(0, ngen, size=nent).astype(np.int64)
        c = rng.integers(1, p, size=nent).astype(np.int64)
        rows = [sorted(set(rng.integers(0, nstd, size=rng.integers(0, nstd + 1)).tolist())) for _ in range(ngen)]
        indptr = np.cumsum([0] + [len(r) for r in rows]).astype(np.int64)
        indices = np.array([i for r in rows for i in r], dtype=np.int64)
        vals = rng.integers(1, p, size=len(indices)).astype(np.int64)
        width = int(nalpha * nstd)
        ref = dense_component(B, a, j, g, c, indptr, indices, vals, width, p)
        ref_kernel = kernels.rref(kernels.left_kernel(ref, F), F)[0]
        for b in BACKENDS:
            M = kernels.component_matrix(B, a, j, g, c, indptr, indices, vals, width, p, backend=b)
            K = kernels.rref(kernels.left_kernel(M, F), F)[0] if M.shape[1] else np.eye(k, dtype=np.int64)
            assert np.array_equal(K, ref_kernel)


def test_backend_switch():
    old = kernels.BACKEND
    try:
        kernels.set_backend("numpy")
        assert kernels.BACKEND == "numpy"
        with pytest.raises(ValueError):
            kernels.set_backend("fortran")
    finally:
        kernels.set_backend(old)


@pytest.mark.parametrize("F", FIELDS, ids=str)
def test_kernel_combination_matches_kernel_then_product(F):
    rng = np.random.default_rng(300 + F.q)
    for _ in range(20):
        n, c, w = rng.integers(1, 8, size=3)
        A = random_matrix(rng, F, n, c)
        B = kernels.rref(random_matrix(rng, F, n, w + n, 1.0), F)[0]
        A = A[: B.shape[0]]
        K = kernels.left_kernel(A, F)
        ref = kernels.rref(kernels.matmul(K, B, F), F)[0] if K.size else B[:0]
        for b in BACKENDS:
            got = kernels.kernel_combination(A, B, F, backend=b)
            assert np.array_equal(got, ref)
