"""Dense mod-p linear-algebra kernels.

Hot inner loops (row reduction and batched basis expansion over F_p) are
compiled with numba when available. Setting the environment variable
``KHOVSOLVE_NO_NUMBA=1`` selects the pure-numpy fallback, which computes
bit-identical results. All kernels require p**2 < 2**63 so products fit
in int64; callers route larger moduli to the generic Python path.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_DISABLED = os.environ.get("KHOVSOLVE_NO_NUMBA", "").lower() in ("1", "true", "yes")

try:
    if _ENV_DISABLED:
        raise ImportError("disabled via KHOVSOLVE_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - environment dependent
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def deco(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return deco


# ---------------------------------------------------------------------------
# row reduction (RREF) mod p
# ---------------------------------------------------------------------------


@njit(cache=True)
def _inv_mod(a, p):  # pragma: no cover - exercised through wrappers
    t, newt = 0, 1
    r, newr = p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    return t % p


@njit(cache=True)
def _rref_nb(A, src, p):  # pragma: no cover - exercised through wrappers
    m, n = A.shape
    piv = np.empty(min(m, n), np.int64)
    r = 0
    for c in range(n):
        pr = -1
        for i in range(r, m):
            if A[i, c] != 0:
                pr = i
                break
        if pr == -1:
            continue
        if pr != r:
            for j in range(n):
                tmp = A[r, j]
                A[r, j] = A[pr, j]
                A[pr, j] = tmp
            tmp2 = src[r]
            src[r] = src[pr]
            src[pr] = tmp2
        inv = _inv_mod(A[r, c], p)
        for j in range(c, n):
            A[r, j] = A[r, j] * inv % p
        for i in range(m):
            if i != r and A[i, c] != 0:
                f = A[i, c]
                for j in range(c, n):
                    A[i, j] = (A[i, j] - f * A[r, j]) % p
        piv[r] = c
        r += 1
        if r == m:
            break
    return piv[:r]


def _rref_np(A, src, p):
    m, n = A.shape
    piv = []
    r = 0
    for c in range(n):
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
            src[[r, i]] = src[[i, r]]
        A[r, c:] = A[r, c:] * pow(int(A[r, c]), p - 2, p) % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            A[np.ix_(rows, np.arange(c, n))] = (
                A[np.ix_(rows, np.arange(c, n))]
                - np.outer(col[rows], A[r, c:])
            ) % p
        piv.append(c)
        r += 1
        if r == m:
            break
    return np.asarray(piv, dtype=np.int64)


def modp_rref(A: np.ndarray, p: int, src: np.ndarray = None) -> np.ndarray:
    """In-place reduced row echelon form of int64 matrix A mod p.

    Returns the pivot column indices; pivot rule is first nonzero row
    scanning columns left to right. When `src` (an int64 index vector of
    length m) is given, row swaps are mirrored in it, so src[:rank] names
    the input rows carrying pivots.
    """
    if A.dtype != np.int64:
        raise TypeError("expected int64 matrix")
    if src is None:
        src = np.arange(A.shape[0], dtype=np.int64)
    if HAVE_NUMBA:
        return _rref_nb(A, src, p)
    return _rref_np(A, src, p)


# ---------------------------------------------------------------------------
# batched subduction against a triangular basis, mod p
# ---------------------------------------------------------------------------


@njit(cache=True)
def _subduct_batch_nb(G, bvals, bcols, bindptr, leadpos, leadinv, p):
    # pragma: no cover - exercised through wrappers
    nbasis = leadpos.shape[0]
    batch = G.shape[0]
    C = np.zeros((batch, nbasis), np.int64)
    for b in range(nbasis):
        c = leadpos[b]
        for r in range(batch):
            g = G[r, c]
            if g != 0:
                coef = g * leadinv[b] % p
                C[r, b] = coef
                for k in range(bindptr[b], bindptr[b + 1]):
                    col = bcols[k]
                    G[r, col] = (G[r, col] - coef * bvals[k]) % p
    return C


def _subduct_batch_np(G, bvals, bcols, bindptr, leadpos, leadinv, p):
    nbasis = leadpos.shape[0]
    batch = G.shape[0]
    C = np.zeros((batch, nbasis), np.int64)
    for b in range(nbasis):
        g = G[:, leadpos[b]]
        rows = np.nonzero(g)[0]
        if rows.size == 0:
            continue
        coef = g[rows] * int(leadinv[b]) % p
        C[rows, b] = coef
        cols = bcols[bindptr[b] : bindptr[b + 1]]
        vals = bvals[bindptr[b] : bindptr[b + 1]]
        G[np.ix_(rows, cols)] = (
            G[np.ix_(rows, cols)] - coef[:, None] * vals[None, :]
        ) % p
    return C


def modp_subduct_batch(G, bvals, bcols, bindptr, leadpos, leadinv, p):
    """Expand the rows of G in a basis with distinct leading columns.

    The basis is given in CSR form (bvals/bcols/bindptr), one row per basis
    element, sorted so that ``leadpos`` (column index of the leading
    monomial) is strictly increasing; ``leadinv`` holds the inverses of the
    leading coefficients. G is reduced in place to the remainders and the
    coefficient matrix is returned.
    """
    if HAVE_NUMBA:
        return _subduct_batch_nb(G, bvals, bcols, bindptr, leadpos, leadinv, p)
    return _subduct_batch_np(G, bvals, bcols, bindptr, leadpos, leadinv, p)


# ---------------------------------------------------------------------------
# matrix product mod p
# ---------------------------------------------------------------------------


@njit(cache=True)
def _matmul_nb(A, B, p):  # pragma: no cover - exercised through wrappers
    m, k = A.shape
    n = B.shape[1]
    C = np.zeros((m, n), np.int64)
    for i in range(m):
        for t in range(k):
            a = A[i, t]
            if a != 0:
                for j in range(n):
                    C[i, j] = (C[i, j] + a * B[t, j]) % p
    return C


def _matmul_np(A, B, p):
    k = A.shape[1]
    # chunk the inner dimension so int64 accumulators cannot overflow
    chunk = max(1, (1 << 62) // (p * p))
    C = np.zeros((A.shape[0], B.shape[1]), np.int64)
    for lo in range(0, k, chunk):
        hi = min(k, lo + chunk)
        C = (C + A[:, lo:hi] @ B[lo:hi, :]) % p
    return C


def modp_matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if HAVE_NUMBA:
        return _matmul_nb(A, B, p)
    return _matmul_np(A, B, p)
