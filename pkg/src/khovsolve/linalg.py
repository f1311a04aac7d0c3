"""Exact linear algebra over QQ and F_p.

Over the rationals, forward elimination is fraction-free Bareiss on
denominator-cleared integer rows (controls coefficient blowup); kernels
are recovered by Fraction back-substitution. Over a prime field the dense
kernels from `_kernels` are used when the modulus is small enough for
int64 arithmetic, with a plain Python row reduction as the general path.

Matrices are lists of rows; rows are lists of field elements.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from . import _kernels
from .fields import QQ, PrimeField

__all__ = [
    "SingularMatrixError",
    "kernel",
    "rank",
    "independent_rows",
    "invert",
    "matmul",
    "identity",
    "first_independent_columns",
]


class SingularMatrixError(ValueError):
    pass


def _is_small_prime(field) -> bool:
    return isinstance(field, PrimeField) and field.numpy_compatible


# ---------------------------------------------------------------------------
# rationals: fraction-free elimination
# ---------------------------------------------------------------------------


def _clear_denominators(row):
    den = 1
    for x in row:
        f = Fraction(x)
        den = den * f.denominator // gcd(den, f.denominator)
    return [int(Fraction(x) * den) for x in row]


def bareiss_echelon(rows):
    """Fraction-free row echelon form of integer rows.

    Returns (echelon_rows, pivot_cols, pivot_source_indices). The source
    indices identify which input rows ended up carrying a pivot.
    """
    M = [list(r) for r in rows]
    m = len(M)
    n = len(M[0]) if m else 0
    src = list(range(m))
    piv_cols = []
    piv_src = []
    prev = 1
    r = 0
    for c in range(n):
        pr = -1
        for i in range(r, m):
            if M[i][c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            M[r], M[pr] = M[pr], M[r]
            src[r], src[pr] = src[pr], src[r]
        pivot = M[r][c]
        rowr = M[r]
        for i in range(r + 1, m):
            rowi = M[i]
            mic = rowi[c]
            if mic == 0:
                if prev != 1:
                    for j in range(c, n):
                        rowi[j] = pivot * rowi[j] // prev
                else:
                    for j in range(c, n):
                        rowi[j] = pivot * rowi[j]
            else:
                for j in range(c, n):
                    rowi[j] = (pivot * rowi[j] - mic * rowr[j]) // prev
        prev = pivot
        piv_cols.append(c)
        piv_src.append(src[r])
        r += 1
        if r == m:
            break
    return M[:r], piv_cols, piv_src


def _kernel_qq(rows, ncols):
    int_rows = [_clear_denominators(r) for r in rows]
    E, piv_cols, _ = bareiss_echelon(int_rows)
    piv_set = set(piv_cols)
    basis = []
    for f in range(ncols):
        if f in piv_set:
            continue
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i in reversed(range(len(piv_cols))):
            pc = piv_cols[i]
            row = E[i]
            s = Fraction(0)
            for j in range(pc + 1, ncols):
                if row[j] and x[j]:
                    s += row[j] * x[j]
            x[pc] = -s / row[pc]
        basis.append(x)
    return basis


# ---------------------------------------------------------------------------
# prime fields
# ---------------------------------------------------------------------------


def _rref_modp_python(rows, p):
    """Plain RREF mod p; returns (reduced_rows, pivot_cols, pivot_sources)."""
    M = [[x % p for x in r] for r in rows]
    m = len(M)
    n = len(M[0]) if m else 0
    src = list(range(m))
    piv_cols = []
    piv_src = []
    r = 0
    for c in range(n):
        pr = -1
        for i in range(r, m):
            if M[i][c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            M[r], M[pr] = M[pr], M[r]
            src[r], src[pr] = src[pr], src[r]
        inv = pow(M[r][c], p - 2, p)
        M[r] = [x * inv % p for x in M[r]]
        rowr = M[r]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                rowi = M[i]
                for j in range(c, n):
                    rowi[j] = (rowi[j] - f * rowr[j]) % p
        piv_cols.append(c)
        piv_src.append(src[r])
        r += 1
        if r == m:
            break
    return M[:r], piv_cols, piv_src


def _rref_modp(rows, field):
    p = field.modulus
    if _is_small_prime(field) and rows:
        A = np.array(rows, dtype=np.int64)
        piv = _kernels.modp_rref(A, p)
        piv_cols = [int(c) for c in piv]
        return A[: len(piv_cols)].tolist(), piv_cols
    R, piv_cols, _ = _rref_modp_python(rows, p)
    return R, piv_cols


def _kernel_modp(rows, ncols, field):
    p = field.modulus
    R, piv_cols = _rref_modp(rows, field)
    piv_set = set(piv_cols)
    basis = []
    for f in range(ncols):
        if f in piv_set:
            continue
        x = [0] * ncols
        x[f] = 1
        for i, pc in enumerate(piv_cols):
            x[pc] = -R[i][f] % p
        basis.append(x)
    return basis


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def kernel(rows, field, ncols):
    """Basis of the right nullspace, one vector per free column in order."""
    if not rows:
        return [
            [field.one if j == f else field.zero for j in range(ncols)]
            for f in range(ncols)
        ]
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged matrix")
    if field == QQ:
        return _kernel_qq(rows, ncols)
    return _kernel_modp(rows, ncols, field)


def rank(rows, field):
    if not rows:
        return 0
    if field == QQ:
        int_rows = [_clear_denominators(r) for r in rows]
        _, piv_cols, _ = bareiss_echelon(int_rows)
        return len(piv_cols)
    _, piv_cols = _rref_modp(rows, field)
    return len(piv_cols)


def independent_rows(rows, field):
    """Indices of a maximal linearly independent row subset.

    Selected by exact forward elimination with first-nonzero pivoting;
    deterministic for a given matrix.
    """
    if not rows:
        return []
    if field == QQ:
        int_rows = [_clear_denominators(r) for r in rows]
        _, _, piv_src = bareiss_echelon(int_rows)
    elif _is_small_prime(field):
        A = np.array(rows, dtype=np.int64)
        src = np.arange(A.shape[0], dtype=np.int64)
        piv = _kernels.modp_rref(A, field.modulus, src)
        piv_src = [int(i) for i in src[: len(piv)]]
    else:
        _, _, piv_src = _rref_modp_python(rows, field.modulus)
    return sorted(piv_src)


def identity(n, field):
    return [
        [field.one if i == j else field.zero for j in range(n)] for i in range(n)
    ]


def matmul(A, B, field):
    if not A or not B:
        return []
    m, k, n = len(A), len(B), len(B[0])
    zero = field.zero
    out = []
    for i in range(m):
        rowa = A[i]
        row = [zero] * n
        for t in range(k):
            a = rowa[t]
            if a == zero:
                continue
            rowb = B[t]
            for j in range(n):
                if rowb[j] != zero:
                    row[j] = field.add(row[j], field.mul(a, rowb[j]))
        out.append(row)
    return out


def invert(rows, field):
    """Exact inverse of a square matrix via Gauss-Jordan on [A | I]."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    M = [list(r) + [field.one if i == j else field.zero for j in range(n)]
         for i, r in enumerate(rows)]
    for c in range(n):
        pr = -1
        for i in range(c, n):
            if M[i][c] != field.zero:
                pr = i
                break
        if pr < 0:
            raise SingularMatrixError(f"singular at column {c}")
        M[c], M[pr] = M[pr], M[c]
        inv = field.inv(M[c][c])
        M[c] = [field.mul(x, inv) for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != field.zero:
                f = M[i][c]
                M[i] = [
                    field.sub(x, field.mul(f, y)) for x, y in zip(M[i], M[c])
                ]
    return [r[n:] for r in M]


def first_independent_columns(rows, field, count=None):
    """Leftmost column indices forming an independent set (greedy)."""
    if not rows:
        return []
    m = len(rows)
    ncols = len(rows[0])
    echelon = []  # list of (pivot_position, reduced column vector)
    chosen = []
    for c in range(ncols):
        v = [rows[i][c] for i in range(m)]
        for pos, w in echelon:
            f = v[pos]
            if f != field.zero:
                v = [field.sub(x, field.mul(f, y)) for x, y in zip(v, w)]
        pos = next((i for i, x in enumerate(v) if x != field.zero), None)
        if pos is None:
            continue
        inv = field.inv(v[pos])
        v = [field.mul(x, inv) for x in v]
        echelon.append((pos, v))
        chosen.append(c)
        if count is not None and len(chosen) == count:
            break
    return chosen
