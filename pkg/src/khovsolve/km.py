"""Khovanskii-Macaulay matrices of structured polynomial systems.

An equation of degree d_i is an element f_i of the degree-d_i graded piece
of the coordinate ring. The KM matrix in degree d has one row per pair
(equation i, point gamma of (d-d_i).A), holding the expansion of
b_{d-d_i,gamma} * f_i in the degree-d graded basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, linalg
from .fields import PrimeField
from .khov import (
    Parameterization,
    check_khovanskii_truncated,
    graded_basis,
    graded_support,
    subduct,
    witness_monomial,
)
from .poly import MultiPoly

__all__ = [
    "Equation",
    "StructuredSystem",
    "KMMatrix",
    "NotInAlgebraError",
    "km_matrix",
    "km_shape",
]


class NotInAlgebraError(ValueError):
    pass


class Equation:
    """One equation: a polynomial f with its homogeneous degree d_i.

    `coeff_form` optionally gives f as coefficients c_alpha over generator
    exponent vectors alpha (len ell+1, sum = d_i), so that
    f = sum c_alpha * prod phi_j**alpha_j. Either f or coeff_form may be
    omitted; the missing one is derived.
    """

    __slots__ = ("f", "degree", "coeff_form")

    def __init__(self, f=None, degree=None, coeff_form=None):
        if f is None and coeff_form is None:
            raise ValueError("equation needs f or coeff_form")
        if degree is None or degree < 1:
            raise ValueError(f"equation degree must be a positive integer, got {degree}")
        self.f = f
        self.degree = int(degree)
        self.coeff_form = dict(coeff_form) if coeff_form is not None else None


def _expand_coeff_form(par: Parameterization, coeff_form, degree):
    F = par.field
    f = MultiPoly.zero(F, par.varnames)
    for alpha, c in coeff_form.items():
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != par.ell + 1 or sum(alpha) != degree:
            raise ValueError(
                f"coefficient exponent {alpha} is not a degree-{degree} "
                f"monomial in {par.ell + 1} generators"
            )
        m = MultiPoly.constant(F, par.varnames, c)
        for j, a in enumerate(alpha):
            if a:
                m = m * par.phi[j] ** a
        f = f + m
    return f


class StructuredSystem:
    """A parameterization together with equations in its graded pieces."""

    def __init__(self, par: Parameterization, equations, validate=True):
        self.par = par
        eqs = []
        for eq in equations:
            if not isinstance(eq, Equation):
                f, degree = eq
                eq = Equation(f=f, degree=degree)
            if eq.f is None:
                eq = Equation(
                    f=_expand_coeff_form(par, eq.coeff_form, eq.degree),
                    degree=eq.degree,
                    coeff_form=eq.coeff_form,
                )
            eqs.append(eq)
        self.equations = tuple(eqs)
        if validate:
            self._validate()

    @property
    def degrees(self):
        return tuple(eq.degree for eq in self.equations)

    def _validate(self):
        F = self.par.field
        for i, eq in enumerate(self.equations):
            res = subduct(self.par, eq.f, eq.degree)
            if not res.remainder.is_zero():
                raise NotInAlgebraError(
                    f"equation {i} is not in the degree-{eq.degree} graded "
                    f"piece (subduction remainder {res.remainder.to_string()})"
                )
            if eq.coeff_form is not None:
                expanded = _expand_coeff_form(self.par, eq.coeff_form, eq.degree)
                if expanded != eq.f:
                    raise ValueError(
                        f"equation {i}: coefficient form does not expand to f"
                    )

    def coefficient_form(self, i):
        """Coefficients of equation i over generator monomials.

        Derived by subduction when not supplied: the basis label beta of
        each coefficient is converted to a generator exponent vector via
        its witness chain.
        """
        eq = self.equations[i]
        if eq.coeff_form is not None:
            return dict(eq.coeff_form)
        res = subduct(self.par, eq.f, eq.degree)
        out = {}
        for beta, c in res.coeffs.items():
            alpha = witness_monomial(self.par, eq.degree, beta)
            out[alpha] = self.par.field.add(
                out.get(alpha, self.par.field.zero), c
            )
        return {a: c for a, c in out.items() if c != self.par.field.zero}


@dataclass(frozen=True)
class KMMatrix:
    degree: int
    row_labels: tuple  # of (equation index, gamma)
    col_labels: tuple  # points of d.A in support order
    entries: tuple  # rows of field elements
    reduced: bool
    field: object = None

    @property
    def shape(self):
        return (len(self.entries), len(self.col_labels))


def km_shape(sys: StructuredSystem, d: int):
    rows = 0
    for eq in sys.equations:
        if d >= eq.degree:
            rows += len(graded_support(sys.par, d - eq.degree))
    return (rows, len(graded_support(sys.par, d)))


def _row_labels(sys, d):
    labels = []
    for i, eq in enumerate(sys.equations):
        if d < eq.degree:
            continue
        for gamma in graded_support(sys.par, d - eq.degree).points:
            labels.append((i, gamma))
    return labels


def _nonzero_remainder_error(sys, d, i):
    report = check_khovanskii_truncated(sys.par, d)
    if report.passed:
        detail = (
            f"the generators pass the truncated Khovanskii check up to "
            f"degree {d}, so equation {i} is not in the graded algebra"
        )
    else:
        c = report.first_failure()
        detail = (
            f"the generators fail the truncated Khovanskii check at degree "
            f"{c.degree} (rank {c.rank} > {c.expected}); the graded basis "
            f"is incomplete"
        )
    return NotInAlgebraError(
        f"nonzero subduction remainder while building KM rows for "
        f"equation {i} at degree {d}: {detail}"
    )


def _km_rows_generic(sys, d, labels):
    par = sys.par
    sup = graded_support(par, d)
    rows = []
    for i, gamma in labels:
        eq = sys.equations[i]
        bprev = graded_basis(par, d - eq.degree)
        prev_sup = graded_support(par, d - eq.degree)
        b = bprev.elements[prev_sup.index[gamma]][1]
        res = subduct(par, b * eq.f, d)
        if not res.remainder.is_zero():
            raise _nonzero_remainder_error(sys, d, i)
        rows.append(res.vector(sup))
    return rows


def _km_rows_modp_batch(sys, d, labels):
    """Fast path over small prime fields: batched dense subduction."""
    par = sys.par
    F = par.field
    p = F.modulus
    sup = graded_support(par, d)
    bas = graded_basis(par, d)
    order = par.ord

    products = []
    for i, gamma in labels:
        eq = sys.equations[i]
        bprev = graded_basis(par, d - eq.degree)
        prev_sup = graded_support(par, d - eq.degree)
        products.append(bprev.elements[prev_sup.index[gamma]][1] * eq.f)

    monomials = set()
    for _, b in bas.elements:
        monomials.update(b.terms)
    for g in products:
        monomials.update(g.terms)
    monomials = sorted(monomials, key=order.key)
    colpos = {e: j for j, e in enumerate(monomials)}

    # basis in CSR form, sorted by leading column
    bsorted = sorted(
        range(len(bas.elements)),
        key=lambda k: order.key(bas.elements[k][0][1:]),
    )
    bvals, bcols, bindptr, leadpos, leadinv = [], [], [0], [], []
    for k in bsorted:
        beta, b = bas.elements[k]
        lead = beta[1:]
        leadpos.append(colpos[lead])
        leadinv.append(F.inv(b.terms[lead]))
        for e, c in sorted(b.terms.items(), key=lambda it: colpos[it[0]]):
            bvals.append(c)
            bcols.append(colpos[e])
        bindptr.append(len(bvals))

    G = np.zeros((len(products), len(monomials)), dtype=np.int64)
    for r, g in enumerate(products):
        for e, c in g.terms.items():
            G[r, colpos[e]] = c
    C = _kernels.modp_subduct_batch(
        G,
        np.asarray(bvals, dtype=np.int64),
        np.asarray(bcols, dtype=np.int64),
        np.asarray(bindptr, dtype=np.int64),
        np.asarray(leadpos, dtype=np.int64),
        np.asarray(leadinv, dtype=np.int64),
        p,
    )
    if np.any(G):
        bad = int(np.nonzero(G.any(axis=1))[0][0])
        raise _nonzero_remainder_error(sys, d, labels[bad][0])

    # reorder coefficient columns from elimination order to support order
    perm = np.empty(len(bsorted), dtype=np.int64)
    for col, k in enumerate(bsorted):
        perm[k] = col
    return C[:, perm].tolist()


def km_matrix(sys: StructuredSystem, d: int, reduce: bool = False) -> KMMatrix:
    """KM matrix in degree d; rows ordered equations outer, gamma inner.

    With reduce=True a maximal independent row subset is kept (found by
    exact forward elimination in row order), preserving the row space
    and the right kernel.
    """
    par = sys.par
    if d < 0:
        raise ValueError(f"degree must be nonnegative, got {d}")
    labels = _row_labels(sys, d)
    fast = isinstance(par.field, PrimeField) and par.field.numpy_compatible
    if fast and labels:
        rows = _km_rows_modp_batch(sys, d, labels)
    else:
        rows = _km_rows_generic(sys, d, labels)
    sup = graded_support(par, d)
    if reduce and rows:
        keep = linalg.independent_rows(rows, par.field)
        labels = [labels[k] for k in keep]
        rows = [rows[k] for k in keep]
    return KMMatrix(
        degree=d,
        row_labels=tuple(labels),
        col_labels=sup.points,
        entries=tuple(tuple(r) for r in rows),
        reduced=bool(reduce),
        field=par.field,
    )
