"""The compiled and pure-numpy kernel variants must agree bit for bit."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from khovsolve import _kernels

P = 9716633


@st.composite
def modp_matrices(draw):
    m = draw(st.integers(1, 6))
    n = draw(st.integers(1, 7))
    data = [
        [draw(st.integers(0, P - 1)) for _ in range(n)] for _ in range(m)
    ]
    return np.array(data, dtype=np.int64)


@given(modp_matrices())
@settings(max_examples=60, deadline=None)
def test_rref_variants_agree(A):
    A1, A2 = A.copy(), A.copy()
    src1 = np.arange(A.shape[0], dtype=np.int64)
    src2 = src1.copy()
    piv_np = _kernels._rref_np(A2, src2, P)
    if _kernels.HAVE_NUMBA:
        piv_nb = _kernels._rref_nb(A1, src1, P)
        assert np.array_equal(piv_nb, piv_np)
        assert np.array_equal(A1, A2)
        assert np.array_equal(src1, src2)
    piv = _kernels.modp_rref(A.copy(), P)
    assert np.array_equal(piv, piv_np)


@given(modp_matrices())
@settings(max_examples=40, deadline=None)
def test_rref_is_reduced(A):
    B = A.copy()
    piv = _kernels.modp_rref(B, P)
    for r, c in enumerate(piv):
        col = B[: len(piv), c]
        assert col[r] == 1
        assert np.count_nonzero(col) == 1


def _random_triangular_basis(rng, nbasis, ncols):
    """CSR basis with strictly increasing leading columns."""
    leadpos = sorted(rng.choice(ncols, size=nbasis, replace=False))
    vals, cols, indptr = [], [], [0]
    leadinv = []
    for lp in leadpos:
        lead_val = int(rng.integers(1, P))
        vals.append(lead_val)
        cols.append(int(lp))
        for c in range(int(lp) + 1, ncols):
            if rng.random() < 0.4:
                vals.append(int(rng.integers(1, P)))
                cols.append(c)
        indptr.append(len(vals))
        leadinv.append(pow(lead_val, P - 2, P))
    return (
        np.array(vals, dtype=np.int64),
        np.array(cols, dtype=np.int64),
        np.array(indptr, dtype=np.int64),
        np.array(leadpos, dtype=np.int64),
        np.array(leadinv, dtype=np.int64),
    )


def test_subduct_batch_variants_agree():
    rng = np.random.default_rng(3)
    for _ in range(10):
        ncols = int(rng.integers(4, 12))
        nbasis = int(rng.integers(1, ncols + 1))
        batch = int(rng.integers(1, 6))
        basis = _random_triangular_basis(rng, nbasis, ncols)
        G = rng.integers(0, P, size=(batch, ncols)).astype(np.int64)
        G1, G2 = G.copy(), G.copy()
        C_np = _kernels._subduct_batch_np(G2, *basis, P)
        if _kernels.HAVE_NUMBA:
            C_nb = _kernels._subduct_batch_nb(G1, *basis, P)
            assert np.array_equal(C_nb, C_np)
            assert np.array_equal(G1, G2)


def test_subduct_batch_reconstructs_input():
    rng = np.random.default_rng(11)
    ncols, nbasis, batch = 10, 6, 4
    bvals, bcols, bindptr, leadpos, leadinv = _random_triangular_basis(
        rng, nbasis, ncols
    )
    # dense basis matrix
    B = np.zeros((nbasis, ncols), dtype=np.int64)
    for b in range(nbasis):
        B[b, bcols[bindptr[b] : bindptr[b + 1]]] = bvals[
            bindptr[b] : bindptr[b + 1]
        ]
    G = rng.integers(0, P, size=(batch, ncols)).astype(np.int64)
    R = G.copy()
    C = _kernels.modp_subduct_batch(
        R, bvals, bcols, bindptr, leadpos, leadinv, P
    )
    # input = C @ B + remainder (mod P)
    recon = (_kernels.modp_matmul(C, B, P) + R) % P
    assert np.array_equal(recon, G)
    # remainders vanish on all leading columns
    assert not R[:, leadpos].any()


def test_matmul_variants_agree():
    rng = np.random.default_rng(7)
    A = rng.integers(0, P, size=(5, 8)).astype(np.int64)
    B = rng.integers(0, P, size=(8, 3)).astype(np.int64)
    expect = np.array(
        [[sum(int(a) * int(b) for a, b in zip(ra, cb)) % P
          for cb in B.T] for ra in A],
        dtype=np.int64,
    )
    assert np.array_equal(_kernels._matmul_np(A, B, P), expect)
    assert np.array_equal(_kernels.modp_matmul(A, B, P), expect)


def test_rref_type_check():
    with pytest.raises(TypeError):
        _kernels.modp_rref(np.zeros((2, 2), dtype=np.float64), P)
