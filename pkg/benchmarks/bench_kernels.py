"""Compare the numba and numpy back ends of the dense kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 64,256,512]

Times row reduction over F_2, F_5 and F_4 (table lookups), the root-component
matrix assembly, and one hash operation from the F_5 example, per back end.
"""

import argparse
import time

import numpy as np

from fpure import CartierMap, FieldSpec, Ideal, PolynomialRing, hash_op, kernels
from fpure.cartier import _PLANS


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_rref(F, n, repeat, backend):
    rng = np.random.default_rng(n)
    A = rng.integers(0, F.q, size=(n, n)).astype(np.int64)
    return best_of(lambda: kernels.rref(A, F, backend=backend), repeat)


def bench_component(n, repeat, backend):
    rng = np.random.default_rng(n)
    p = 5
    nalpha, nstd, ngen = 8, 40, 60
    B = rng.integers(0, p, size=(n // 2, n)).astype(np.int64)
    nent = 4 * n
    a = np.sort(rng.integers(0, nalpha, size=nent)).astype(np.int64)
    j = rng.integers(0, n, size=nent).astype(np.int64)
    g = rng.integers(0, ngen, size=nent).astype(np.int64)
    c = rng.integers(1, p, size=nent).astype(np.int64)
    lens = rng.integers(0, 6, size=ngen)
    indptr = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
    indices = rng.integers(0, nstd, size=int(indptr[-1])).astype(np.int64)
    vals = rng.integers(1, p, size=int(indptr[-1])).astype(np.int64)
    return best_of(lambda: kernels.component_matrix(B, a, j, g, c, indptr, indices, vals,
                                                    nalpha * nstd, p, backend=backend), repeat)


def bench_hash(repeat, backend):
    R = PolynomialRing(FieldSpec(5), ["x", "y", "z"])
    phi = CartierMap(R("(x^4+y^4+z^4)^4"), 1)
    J = Ideal(R, [R("x"), R("y"), R("z")])
    old = kernels.BACKEND
    kernels.set_backend(backend)
    try:
        def run():
            _PLANS.clear()
            hash_op(phi, J)
        return best_of(run, repeat)
    finally:
        kernels.set_backend(old)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sizes", default="64,256,512")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    backends = ["numba", "numpy"]

    # compile once so the numba column measures steady state
    for b in backends:
        bench_rref(FieldSpec(2), 8, 1, b)
        bench_rref(FieldSpec(2, 2, (1, 1, 1)), 8, 1, b)
        bench_component(16, 1, b)

    rows = []
    for F in (FieldSpec(2), FieldSpec(5), FieldSpec(2, 2, (1, 1, 1))):
        for n in sizes:
            rows.append((f"rref F_{F.q} {n}x{n}", *(bench_rref(F, n, args.repeat, b) for b in backends)))
    for n in sizes:
        rows.append((f"component matrix n={n}", *(bench_component(n, args.repeat, b) for b in backends)))
    rows.append(("hash <x,y,z>, F_5 example", *(bench_hash(args.repeat, b) for b in backends)))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'numba s':>10}  {'numpy s':>10}  {'speedup':>8}")
    for name, tn, tp in rows:
        print(f"{name:<{width}}  {tn:10.4f}  {tp:10.4f}  {tp / tn:8.1f}x")


if __name__ == "__main__":
    main()
