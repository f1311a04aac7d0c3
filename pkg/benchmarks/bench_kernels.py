"""Compare the numba kernels with the pure-numpy fallback.

Runs the two hot mod-p kernels (row reduction and batched subduction) on
matrices shaped like the ones the solver produces, in both backends, and
prints a timing table. The backends must return bit-identical results;
this script asserts that too.

Run as:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from khovsolve import _kernels

P = 9716633


def _timeit(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _random_basis(rng, nbasis, ncols):
    leadpos = np.sort(rng.choice(ncols, size=nbasis, replace=False))
    vals, cols, indptr, leadinv = [], [], [0], []
    for lp in leadpos:
        lead = int(rng.integers(1, P))
        vals.append(lead)
        cols.append(int(lp))
        extra = rng.choice(
            np.arange(int(lp) + 1, ncols),
            size=min(ncols - int(lp) - 1, 30),
            replace=False,
        )
        for c in np.sort(extra):
            vals.append(int(rng.integers(1, P)))
            cols.append(int(c))
        indptr.append(len(vals))
        leadinv.append(pow(lead, P - 2, P))
    return (
        np.array(vals, dtype=np.int64),
        np.array(cols, dtype=np.int64),
        np.array(indptr, dtype=np.int64),
        leadpos.astype(np.int64),
        np.array(leadinv, dtype=np.int64),
    )


def bench_rref(rng, m, n):
    A = rng.integers(0, P, size=(m, n)).astype(np.int64)
    args_nb = (A.copy(), np.arange(m, dtype=np.int64), P)
    args_np = (A.copy(), np.arange(m, dtype=np.int64), P)
    if _kernels.HAVE_NUMBA:
        _kernels._rref_nb(A[:4, :4].copy(), np.arange(4, dtype=np.int64), P)
        t_nb, piv_nb = _timeit(
            lambda: _kernels._rref_nb(args_nb[0].copy(), args_nb[1].copy(), P)
        )
    else:
        t_nb, piv_nb = None, None
    t_np, piv_np = _timeit(
        lambda: _kernels._rref_np(args_np[0].copy(), args_np[1].copy(), P)
    )
    if piv_nb is not None:
        A1, s1 = args_nb[0].copy(), args_nb[1].copy()
        A2, s2 = args_np[0].copy(), args_np[1].copy()
        assert np.array_equal(
            _kernels._rref_nb(A1, s1, P), _kernels._rref_np(A2, s2, P)
        )
        assert np.array_equal(A1, A2) and np.array_equal(s1, s2)
    return t_nb, t_np


def bench_subduct(rng, batch, nbasis, ncols):
    basis = _random_basis(rng, nbasis, ncols)
    G = rng.integers(0, P, size=(batch, ncols)).astype(np.int64)
    if _kernels.HAVE_NUMBA:
        _kernels._subduct_batch_nb(G[:2].copy(), *basis, P)
        t_nb, _ = _timeit(
            lambda: _kernels._subduct_batch_nb(G.copy(), *basis, P)
        )
    else:
        t_nb = None
    t_np, _ = _timeit(lambda: _kernels._subduct_batch_np(G.copy(), *basis, P))
    G1, G2 = G.copy(), G.copy()
    C1 = _kernels._subduct_batch_np(G1, *basis, P)
    if _kernels.HAVE_NUMBA:
        C2 = _kernels._subduct_batch_nb(G2, *basis, P)
        assert np.array_equal(C1, C2) and np.array_equal(G1, G2)
    return t_nb, t_np


def main():
    rng = np.random.default_rng(0)
    backend = "numba" if _kernels.HAVE_NUMBA else "numpy only (numba disabled)"
    print(f"backend available: {backend}, p = {P}")
    print()
    print(f"{'kernel':<28}{'size':<18}{'numba':>10}{'numpy':>10}{'speedup':>9}")
    rows = [
        ("modp_rref", (150, 220)),
        ("modp_rref", (400, 600)),
        ("modp_rref", (800, 1100)),
    ]
    for name, (m, n) in rows:
        t_nb, t_np = bench_rref(rng, m, n)
        nb = f"{t_nb * 1e3:8.1f}ms" if t_nb is not None else "      n/a"
        ratio = f"{t_np / t_nb:8.1f}x" if t_nb else "     n/a"
        print(f"{name:<28}{f'{m}x{n}':<18}{nb:>10}{t_np * 1e3:8.1f}ms{ratio:>9}")
    subs = [
        (100, 150, 400),
        (400, 400, 1200),
        (800, 700, 2000),
    ]
    for batch, nbasis, ncols in subs:
        t_nb, t_np = bench_subduct(rng, batch, nbasis, ncols)
        nb = f"{t_nb * 1e3:8.1f}ms" if t_nb is not None else "      n/a"
        ratio = f"{t_np / t_nb:8.1f}x" if t_nb else "     n/a"
        size = f"{batch}x{ncols}/{nbasis}"
        print(f"{'modp_subduct_batch':<28}{size:<18}{nb:>10}{t_np * 1e3:8.1f}ms{ratio:>9}")


if __name__ == "__main__":
    main()
