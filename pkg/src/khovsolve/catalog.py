"""Built-in problem families.

Covers the worked families used throughout the tests: Duffing oscillator
systems, a quintic del Pezzo surface, a Bott-Samelson threefold,
Grassmannians in Pluecker coordinates, Schubert-condition equations
(with random or osculating flags) and random dense systems.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field as dc_field
from math import comb

from . import linalg
from .fields import QQ
from .khov import (
    Parameterization,
    build_parameterization,
    check_khovanskii_truncated,
    graded_support,
    subduct,
)
from .km import Equation, StructuredSystem
from .poly import MultiPoly, WeightOrder, parse_polynomial

__all__ = [
    "ProblemInstance",
    "duffing",
    "del_pezzo",
    "bott_samelson",
    "pluecker_chart",
    "SchubertCondition",
    "schubert_equations",
    "random_flags",
    "osculating_flag",
    "random_dense_system",
    "chart_matrix_from_pluecker",
    "get_instance",
]


@dataclass(frozen=True)
class ProblemInstance:
    sys: StructuredSystem
    expected_count: int = None
    recommended_dreg: int = None
    note: str = ""
    extras: dict = dc_field(default_factory=dict)


# ---------------------------------------------------------------------------
# Duffing oscillator
# ---------------------------------------------------------------------------


def duffing(coeffs=((1, 3, 5, 7), (11, 13, 17, 19)), field=QQ) -> ProblemInstance:
    """Steady states of a damped driven oscillator.

    f_1 = c10 + c11 t1 + c12 t2 + c13 t1(t1^2+t2^2)
    f_2 = c20 + c21 t1 + c22 t2 + c23 t2(t1^2+t2^2)
    on the surface parameterized by (1, t1, t2, t1(t1^2+t2^2), t2(t1^2+t2^2)).
    """
    varnames = ("t1", "t2")
    phi = [
        parse_polynomial(s, varnames, field)
        for s in ("1", "t1", "t2", "t1*(t1^2+t2^2)", "t2*(t1^2+t2^2)")
    ]
    par = build_parameterization(phi, WeightOrder((0, -1)), field)
    (c1, c2) = coeffs
    e = lambda j: tuple(1 if i == j else 0 for i in range(5))
    form1 = {e(0): field.from_int(c1[0]), e(1): field.from_int(c1[1]),
             e(2): field.from_int(c1[2]), e(3): field.from_int(c1[3])}
    form2 = {e(0): field.from_int(c2[0]), e(1): field.from_int(c2[1]),
             e(2): field.from_int(c2[2]), e(4): field.from_int(c2[3])}
    eqs = []
    for form in (form1, form2):
        form = {a: c for a, c in form.items() if c != field.zero}
        if not form:
            warnings.warn("degenerate Duffing instance: an equation is zero")
        eqs.append(Equation(degree=1, coeff_form=form))
    sys = StructuredSystem(par, eqs)
    return ProblemInstance(
        sys,
        expected_count=5,
        recommended_dreg=3,
        note="two cubic oscillator equations, five solutions",
    )


# ---------------------------------------------------------------------------
# quintic del Pezzo surface
# ---------------------------------------------------------------------------


def del_pezzo(field=QQ) -> Parameterization:
    """Degree-5 del Pezzo surface: the plane blown up in four points."""
    varnames = ("t1", "t2")
    phi = [
        parse_polynomial(s, varnames, field)
        for s in (
            "t1-t2",
            "t2^2-t2",
            "t1*t2-t2",
            "t1^2-t2",
            "t1*t2^2-t2",
            "t1^2*t2-t2",
        )
    ]
    return build_parameterization(phi, WeightOrder((-2, -1)), field)


# ---------------------------------------------------------------------------
# Bott-Samelson threefold
# ---------------------------------------------------------------------------


def bott_samelson(field=QQ) -> ProblemInstance:
    """A threefold in P^7 with three fixed linear equations, six solutions."""
    varnames = ("t1", "t2", "t3")
    phi = [
        parse_polynomial(s, varnames, field)
        for s in (
            "1",
            "t1",
            "t2",
            "t3",
            "t1*t3",
            "t2*t3",
            "t1*(t1*t3+t2)",
            "t2*(t1*t3+t2)",
        )
    ]
    par = build_parameterization(phi, WeightOrder((0, -1, 0)), field)
    coeff_rows = (
        (1, 1, 1, 1, 1, 1, 1, 1),
        (1, -2, 3, -4, 5, -6, 7, -8),
        (2, 3, 5, 7, 11, 13, 17, 19),
    )
    eqs = []
    for row in coeff_rows:
        form = {}
        for j, c in enumerate(row):
            alpha = tuple(1 if i == j else 0 for i in range(8))
            form[alpha] = field.from_int(c)
        eqs.append(Equation(degree=1, coeff_form=form))
    sys = StructuredSystem(par, eqs)
    return ProblemInstance(
        sys,
        expected_count=6,
        recommended_dreg=3,
        note="three linear sections of a Bott-Samelson threefold",
    )


# ---------------------------------------------------------------------------
# Grassmannians in Pluecker coordinates
# ---------------------------------------------------------------------------


def _det(rows, field):
    """Exact determinant by Leibniz expansion (small matrices only)."""
    k = len(rows)
    total = None
    for perm in itertools.permutations(range(k)):
        inv = sum(
            1
            for a in range(k)
            for b in range(a + 1, k)
            if perm[a] > perm[b]
        )
        term = rows[0][perm[0]]
        for r in range(1, k):
            term = term * rows[r][perm[r]]
        if inv % 2:
            term = -term
        total = term if total is None else total + term
    return total


def _chart_matrix(k, m, field):
    """The k x m matrix [I | T] with T filled row-major by t_1..t_n."""
    n = k * (m - k)
    varnames = tuple(f"t{i}" for i in range(1, n + 1))
    rows = []
    for a in range(k):
        row = []
        for b in range(k):
            c = field.one if a == b else field.zero
            row.append(MultiPoly.constant(field, varnames, c))
        for b in range(m - k):
            row.append(MultiPoly.variable(field, varnames, a * (m - k) + b))
        rows.append(row)
    return rows, varnames


def _pluecker_weights(k, m):
    # w(t_{a,b}) = -(3^a * b), rows a and columns b counted from 1; this
    # strictly convex choice makes each minor's diagonal-type term the
    # unique weight-minimal one (validated after construction)
    w = []
    for a in range(1, k + 1):
        for b in range(1, m - k + 1):
            w.append(-(3**a * b))
    return tuple(w)


def pluecker_chart(k, m, field=QQ, validate_degree=2) -> Parameterization:
    """Gr(k,m) parameterized by the k x k minors of [I | t-block].

    Minors are listed in lexicographic column-set order. The weight
    vector is checked to give a Khovanskii basis up to validate_degree;
    a small randomized weight search is the fallback.
    """
    if not (1 <= k < m):
        raise ValueError(f"need 1 <= k < m, got k={k}, m={m}")
    H, varnames = _chart_matrix(k, m, field)
    phi = []
    for cols in itertools.combinations(range(m), k):
        sub = [[H[r][c] for c in cols] for r in range(k)]
        phi.append(_det(sub, field))
    candidates = [_pluecker_weights(k, m)]
    rng = random.Random(k * 1000 + m)
    for _ in range(20):
        candidates.append(tuple(-rng.randint(1, 50) for _ in varnames))
    last = None
    for w in candidates:
        try:
            par = build_parameterization(phi, WeightOrder(w), field)
        except ValueError as err:
            last = err
            continue
        if validate_degree < 1:
            return par
        report = check_khovanskii_truncated(par, validate_degree)
        if report.passed:
            return par
        last = ValueError(
            f"weight {w} fails the truncated Khovanskii check: "
            f"{report.first_failure()}"
        )
    raise ValueError(
        f"no diagonal-selecting weight found for Gr({k},{m}): {last}"
    )


# ---------------------------------------------------------------------------
# Schubert conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SchubertCondition:
    alpha: tuple  # strictly increasing indices in 1..m
    flag: tuple  # m x m invertible matrix; rows 1..alpha_i span F_{alpha_i}

    def dimension(self):
        return sum(a - i - 1 for i, a in enumerate(self.alpha))


def random_flags(m, count, seed=0, field=QQ):
    """Seeded random m x m flags with entries in -10..10, invertible."""
    rng = random.Random(seed)
    flags = []
    for _ in range(count):
        while True:
            rows = [
                [field.from_int(rng.randint(-10, 10)) for _ in range(m)]
                for _ in range(m)
            ]
            if linalg.rank(rows, field) == m:
                break
        flags.append(tuple(tuple(r) for r in rows))
    return flags


def osculating_flag(s, m, field=QQ):
    """Flag of derivatives of the moment curve (1, s, s^2, ..., s^{m-1}).

    Row i (1-based) is the (i-1)-th derivative, so row 1 is the curve
    point itself and the flag is invertible for every s.
    """
    sv = field.from_int(s) if isinstance(s, int) else s
    rows = []
    for i in range(m):  # i-th derivative
        row = []
        for j in range(m):
            if j < i:
                row.append(field.zero)
            else:
                c = 1
                for q in range(j, j - i, -1):
                    c *= q
                val = field.from_int(c)
                for _ in range(j - i):
                    val = field.mul(val, sv)
                row.append(val)
        rows.append(tuple(row))
    return tuple(rows)


# Observed working degrees and counts for Schubert problems on Gr(3,6);
# keys are sorted multisets of conditions.
_GR36_TABLE = {
    (((2, 4, 6),) * 3): (2, 2),
    (((3, 5, 6),) * 9): (42, 5),
    (((2, 5, 6),) * 1 + ((3, 5, 6),) * 7): (21, 4),
    (((2, 5, 6),) * 2 + ((3, 5, 6),) * 5): (11, 3),
    (((2, 5, 6),) * 3 + ((3, 5, 6),) * 3): (6, 3),
    (((2, 5, 6),) * 4 + ((3, 5, 6),) * 1): (3, 2),
}


def schubert_equations(
    k, m, conditions, field=QQ, par=None, validate_degree=2
) -> ProblemInstance:
    """Linear equations in Pluecker coordinates cutting out a Schubert problem.

    For each condition (alpha, F) and each i with k+alpha_i-i+1 <= m, all
    minors of that size of the stacked matrix (H; F_{alpha_i}) are expanded
    as t-polynomials, expressed in the degree-1 basis, and linearly
    dependent ones are dropped.
    """
    n = k * (m - k)
    conditions = list(conditions)
    for cond in conditions:
        alpha = cond.alpha
        if list(alpha) != sorted(set(alpha)) or alpha[-1] > m or alpha[0] < 1:
            raise ValueError(f"invalid Schubert indices {alpha}")
        if linalg.rank([list(r) for r in cond.flag], field) != m:
            raise ValueError("flag matrix is singular")
    codim = sum(n - cond.dimension() for cond in conditions)
    if codim != n:
        raise ValueError(
            f"conditions cut codimension {codim}, expected n = {n}; not a "
            f"zero-dimensional Schubert problem"
        )
    if par is None:
        par = pluecker_chart(k, m, field, validate_degree=validate_degree)
    H, _ = _chart_matrix(k, m, field)
    const = lambda c: MultiPoly.constant(field, par.varnames, c)

    minors = []
    for cond in conditions:
        for i, ai in enumerate(cond.alpha, start=1):
            size = k + ai - i + 1
            if size > min(k + ai, m):
                continue
            stacked = list(H) + [
                [const(c) for c in cond.flag[r]] for r in range(ai)
            ]
            for rsel in itertools.combinations(range(k + ai), size):
                for csel in itertools.combinations(range(m), size):
                    sub = [[stacked[r][c] for c in csel] for r in rsel]
                    d = _det(sub, field)
                    if not d.is_zero():
                        minors.append(d)

    # express in the degree-1 basis and keep an independent subset
    sup = graded_support(par, 1)
    vectors = []
    for g in minors:
        res = subduct(par, g, 1)
        if not res.remainder.is_zero():
            raise ValueError(
                "a Schubert minor is not linear in the Pluecker coordinates"
            )
        vectors.append(res.vector(sup))
    keep = linalg.independent_rows(vectors, field)
    eqs = [Equation(f=minors[i], degree=1) for i in keep]
    sys = StructuredSystem(par, eqs, validate=False)

    expected = dreg = None
    if (k, m) == (3, 6):
        key = tuple(sorted(tuple(c.alpha) for c in conditions))
        if key in _GR36_TABLE:
            expected, dreg = _GR36_TABLE[key]
    return ProblemInstance(
        sys,
        expected_count=expected,
        recommended_dreg=dreg,
        note=f"Schubert problem on Gr({k},{m})",
        extras={
            "n_raw_equations": len(minors),
            "n_equations": len(eqs),
        },
    )


def chart_matrix_from_pluecker(k, m, coords, pivots=None):
    """Reconstruct a k x m matrix from floating Pluecker coordinates.

    `coords` is indexed by k-subsets of columns in lexicographic order.
    The result is in reduced form on the pivot columns (identity there);
    pivots default to the subset with the largest coordinate.
    """
    subsets = list(itertools.combinations(range(m), k))
    index = {S: i for i, S in enumerate(subsets)}
    p = [complex(c) for c in coords]
    if pivots is None:
        pivots = subsets[max(range(len(p)), key=lambda i: abs(p[i]))]
    pivots = tuple(pivots)
    pS = p[index[pivots]]
    if abs(pS) == 0:
        raise ValueError(f"pivot coordinate {pivots} vanishes")
    H = [[0j] * m for _ in range(k)]
    for i, s in enumerate(pivots):
        H[i][s] = 1.0
    for j in range(m):
        if j in pivots:
            continue
        for i in range(k):
            T = tuple(sorted(set(pivots) - {pivots[i]} | {j}))
            # sign of the row permutation induced by sorting the columns
            rows = []
            for c in T:
                rows.append(i if c == j else pivots.index(c))
            inv = sum(
                1
                for a in range(k)
                for b in range(a + 1, k)
                if rows[a] > rows[b]
            )
            sign = -1 if inv % 2 else 1
            H[i][j] = sign * p[index[T]] / pS
    return H


# ---------------------------------------------------------------------------
# random dense systems
# ---------------------------------------------------------------------------


def random_dense_system(par, degrees, seed=0, zero_coeffs=()):
    """Equations with seeded random coefficients on every generator monomial.

    `zero_coeffs` lists (equation index, alpha) pairs forced to zero, for
    structured sparsity patterns.
    """
    field = par.field
    rng = random.Random(seed)
    zero_set = {(i, tuple(a)) for i, a in zero_coeffs}
    eqs = []
    for i, d in enumerate(degrees):
        form = {}
        for alpha in sorted(_compositions(d, par.ell + 1)):
            if (i, alpha) in zero_set:
                continue
            if field == QQ:
                c = field.from_int(rng.randint(1, 100))
            else:
                c = rng.randrange(1, field.modulus)
            form[alpha] = c
        eqs.append(Equation(degree=d, coeff_form=form))
    return StructuredSystem(par, eqs, validate=False)


def _compositions(d, parts):
    if parts == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in _compositions(d - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# name-based access for the CLI
# ---------------------------------------------------------------------------


def get_instance(name, field=QQ, seed=0):
    """Catalog entries by name: duffing, delpezzo, bottsamelson,
    grassmannian:k,m. del Pezzo and Grassmannians get a seeded random
    system of two (resp. n) dense equations of degree 1."""
    if name == "duffing":
        return duffing(field=field)
    if name == "bottsamelson":
        return bott_samelson(field=field)
    if name == "delpezzo":
        par = del_pezzo(field=field)
        sys = random_dense_system(par, (1, 1), seed=seed)
        return ProblemInstance(
            sys, expected_count=5, recommended_dreg=3,
            note="random linear equations on the quintic del Pezzo surface",
        )
    if name.startswith("grassmannian:"):
        k, m = (int(x) for x in name.split(":", 1)[1].split(","))
        par = pluecker_chart(k, m, field)
        n = k * (m - k)
        sys = random_dense_system(par, (1,) * n, seed=seed)
        hp_degree = None
        return ProblemInstance(
            sys, expected_count=hp_degree, recommended_dreg=None,
            note=f"random linear equations on Gr({k},{m})",
        )
    raise KeyError(f"unknown catalog entry {name!r}")
