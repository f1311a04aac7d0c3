import cmath

import pytest

from khovsolve import catalog, linalg
from khovsolve.fields import GF, QQ
from khovsolve.hilbert import hilbert_function
from khovsolve.km import km_matrix
from khovsolve.solver import (
    SolverError,
    UnsupportedFieldError,
    brute_force_affine,
    extract_solutions,
    kernel_basis,
    multiplication_matrices,
    normalize_solutions,
    residuals,
    solve,
)

P = 9716633


@pytest.fixture(scope="module")
def duffing():
    return catalog.duffing()


def test_duffing_nullity_sequence(duffing):
    nullities = []
    for d in range(5):
        M = km_matrix(duffing.sys, d, reduce=True)
        nullities.append(kernel_basis(M).nullity)
    assert nullities == [1, 3, 5, 5, 5]


def test_duffing_end_to_end(duffing):
    sols = solve(duffing.sys, dreg=3, seed=0)
    assert len(sols) == 5
    assert all(r < 1e-8 for r in sols.residuals)
    assert sols.diagnostics["delta"] == 5
    assert sols.diagnostics["dreg"] == 3


def test_duffing_default_dreg(duffing):
    # with s = n the regularity bound gives dreg automatically
    sols = solve(duffing.sys, seed=0)
    assert sols.diagnostics["dreg"] == 3
    assert len(sols) == 5


def test_duffing_adaptive_dreg(duffing):
    sols = solve(duffing.sys, adaptive=True, seed=0)
    assert len(sols) == 5


def test_solutions_satisfy_original_equations(duffing):
    # plug the affine points t = (x1/x0, x2/x0) back into the t-equations
    sols = solve(duffing.sys, dreg=3, seed=0, normalize="first")
    for row in sols.coords:
        t = (complex(row[1]), complex(row[2]))
        for eq in duffing.sys.equations:
            val = sum(
                float(c) * t[0] ** e[0] * t[1] ** e[1]
                for e, c in eq.f.terms.items()
            )
            assert abs(val) < 1e-6


def _check_mult_invariants(sys, ms):
    field = sys.par.field
    delta = ms.delta
    mats = [[list(r) for r in m] for m in ms.mats]
    ident = linalg.identity(delta, field)
    acc = [[field.zero] * delta for _ in range(delta)]
    for cj, m in zip(ms.h_coeffs, mats):
        for r in range(delta):
            for s in range(delta):
                acc[r][s] = field.add(acc[r][s], field.mul(cj, m[r][s]))
    assert acc == ident
    for j in range(len(mats)):
        for k in range(j + 1, len(mats)):
            assert linalg.matmul(mats[j], mats[k], field) == linalg.matmul(
                mats[k], mats[j], field
            )


def test_multiplication_matrices_duffing(duffing):
    M = km_matrix(duffing.sys, 3, reduce=True)
    N = kernel_basis(M)
    ms = multiplication_matrices(duffing.sys, N, 2, seed=0)
    assert ms.delta == 5
    _check_mult_invariants(duffing.sys, ms)


@pytest.mark.parametrize("d", [1, 2])
def test_del_pezzo_delta_over_fp(d):
    """Random degree-d systems on the quintic del Pezzo surface have
    5d^2 solutions; checked as the kernel dimension over F_9716633."""
    par = catalog.del_pezzo(field=GF(P))
    sys = catalog.random_dense_system(par, (d, d), seed=7)
    dreg = 2 * d + 1
    M = km_matrix(sys, dreg, reduce=True)
    N = kernel_basis(M)
    assert N.nullity == 5 * d * d
    ms = multiplication_matrices(sys, N, dreg - 1, seed=0)
    assert ms.delta == 5 * d * d
    _check_mult_invariants(sys, ms)


def test_finite_field_solutions_annihilate_km_rows():
    """Brute-force affine roots over F_101, pushed through the
    parameterization, give kernel functionals of the KM matrix."""
    p = 101
    F = GF(p)
    par = catalog.del_pezzo(field=F)
    sys = catalog.random_dense_system(par, (1, 1), seed=3)
    hits = brute_force_affine(sys)
    dreg = 3
    M = km_matrix(sys, dreg)
    N = kernel_basis(M)
    assert N.nullity == 5
    from khovsolve.khov import graded_basis

    bas = graded_basis(par, dreg)
    checked = 0
    for t in hits:
        v = [b.evaluate(t) for _, b in bas.elements]
        if not any(v):
            continue  # base point of the parameterization
        checked += 1
        for row in M.entries:
            assert sum(c * x for c, x in zip(row, v)) % p == 0
        # the evaluation vector lies in the kernel row space
        stacked = [list(r) for r in N.N] + [v]
        assert linalg.rank(stacked, F) == N.nullity
    assert 0 < checked <= 5


def test_brute_force_guards():
    par = catalog.del_pezzo(field=GF(101))
    sys = catalog.random_dense_system(par, (1, 1), seed=3)
    assert len(brute_force_affine(sys)) > 0
    qq = catalog.duffing().sys
    with pytest.raises(UnsupportedFieldError):
        brute_force_affine(qq)
    big = catalog.random_dense_system(
        catalog.del_pezzo(field=GF(P)), (1, 1), seed=3
    )
    with pytest.raises(ValueError):
        brute_force_affine(big)


def test_solve_rejects_finite_fields():
    par = catalog.del_pezzo(field=GF(P))
    sys = catalog.random_dense_system(par, (1, 1), seed=7)
    with pytest.raises(UnsupportedFieldError):
        solve(sys, dreg=3)


def test_extract_rejects_integer_matrices():
    par = catalog.del_pezzo(field=GF(P))
    sys = catalog.random_dense_system(par, (1, 1), seed=7)
    M = km_matrix(sys, 3, reduce=True)
    N = kernel_basis(M)
    ms = multiplication_matrices(sys, N, 2, seed=0)
    with pytest.raises(UnsupportedFieldError):
        extract_solutions(ms)


def test_normalize_solutions():
    rows = [(2.0, 4.0, -6.0), (1.0, 0.0, 3.0)]
    assert normalize_solutions(rows, "raw") == [list(r) for r in rows]
    out = normalize_solutions(rows, "first")
    assert out[0] == [1.0, 2.0, -3.0]
    with pytest.raises(ValueError):
        normalize_solutions([(0.0, 1.0)], "first")
    with pytest.raises(ValueError):
        normalize_solutions(rows, "euclidean")


def test_residuals_detect_perturbation(duffing):
    sols = solve(duffing.sys, dreg=3, seed=0)
    row = list(sols.coords[0])
    good = residuals(duffing.sys, [row])[0]
    assert good < 1e-8
    row[1] *= 1 + 1e-2
    bad = residuals(duffing.sys, [row])[0]
    assert bad > 1e-4


def test_solve_error_paths(duffing):
    from khovsolve.km import StructuredSystem

    par = duffing.sys.par
    with pytest.raises(SolverError, match="no equations"):
        solve(StructuredSystem(par, []))
    one_eq = StructuredSystem(par, [duffing.sys.equations[0]])
    with pytest.raises(SolverError, match="dreg"):
        solve(one_eq)
    with pytest.raises(SolverError, match="degree shift"):
        solve(duffing.sys, dreg=1)


def test_adaptive_detects_positive_dimension(duffing):
    from khovsolve.km import StructuredSystem

    par = duffing.sys.par
    one_eq = StructuredSystem(par, [duffing.sys.equations[0]])
    with pytest.raises(SolverError, match="stabilize|positive"):
        solve(one_eq, adaptive=True)


def test_rank_nullity_on_solved_instances():
    for inst in (catalog.duffing(), catalog.bott_samelson()):
        sys = inst.sys
        d = inst.recommended_dreg
        M = km_matrix(sys, d)
        rk = linalg.rank([list(r) for r in M.entries], QQ)
        assert rk + kernel_basis(M).nullity == hilbert_function(sys.par, d)


def test_bott_samelson_solutions():
    inst = catalog.bott_samelson()
    sols = solve(inst.sys, dreg=3, seed=0, normalize="first")
    assert len(sols) == 6
    assert all(r < 1e-8 for r in sols.residuals)
    target = (
        1, -0.689522, 0.928435, -1.35986,
        0.937652, -1.26254, -1.28671, 1.73254,
    )
    best = min(
        max(abs(complex(x) - y) for x, y in zip(row, target))
        for row in sols.coords
    )
    assert best < 1e-4


def test_solution_coordinates_are_eigenvalue_ratios(duffing):
    # raw coordinates are x_j(z)/h(z); scaling a row keeps residual zero
    sols = solve(duffing.sys, dreg=3, seed=0)
    row = [2.0 * complex(x) for x in sols.coords[0]]
    assert residuals(duffing.sys, [row])[0] < 1e-8


def test_seed_determinism(duffing):
    a = solve(duffing.sys, dreg=3, seed=5)
    b = solve(duffing.sys, dreg=3, seed=5)
    assert a.coords == b.coords
    assert a.diagnostics["h_coeffs"] == b.diagnostics["h_coeffs"]
