"""Khovanskii-basis layer for a parameterized projective variety.

The variety is the closure of the image of t -> (phi_0(t) : ... : phi_ell(t)).
With psi_j = t_0 * phi_j, the leading exponents of the psi_j form the
columns of an (n+1) x (ell+1) matrix A whose first row is all ones. When
the phi_j are a Khovanskii basis under the chosen weight order, the graded
piece of the coordinate ring in degree d has a monomial-indexed basis
labelled by the d-element column sums of A, and every element can be
expanded in that basis by subduction (leading-term elimination).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import linalg
from .poly import MultiPoly, WeightOrder

__all__ = [
    "Parameterization",
    "build_parameterization",
    "GradedSupport",
    "graded_support",
    "GradedBasis",
    "graded_basis",
    "SubductionResult",
    "subduct",
    "witness_monomial",
    "DegreeCheck",
    "KhovanskiiReport",
    "check_khovanskii_truncated",
]


class Parameterization:
    """A tuple of nonzero polynomials phi_0..phi_ell with a weight order.

    `A` is the matrix of leading exponents of the homogenized generators:
    column j is (1, leading_exponent(phi_j)). Graded supports and bases
    are cached per degree on the instance.
    """

    __slots__ = ("field", "varnames", "phi", "ord", "A", "_supports", "_bases")

    def __init__(self, field, varnames, phi, ord, A):
        self.field = field
        self.varnames = tuple(varnames)
        self.phi = tuple(phi)
        self.ord = ord
        self.A = tuple(tuple(row) for row in A)
        self._supports = {}
        self._bases = {}

    @property
    def n(self) -> int:
        return len(self.varnames)

    @property
    def ell(self) -> int:
        return len(self.phi) - 1

    def column(self, j):
        """Column j of A as an (n+1)-tuple."""
        return tuple(self.A[i][j] for i in range(self.n + 1))

    def __repr__(self):
        return (
            f"Parameterization(n={self.n}, ell={self.ell}, "
            f"field={self.field!r}, ord={self.ord!r})"
        )


def build_parameterization(phi, ord: WeightOrder, field=None) -> Parameterization:
    phi = tuple(phi)
    if not phi:
        raise ValueError("need at least one generator")
    if field is None:
        field = phi[0].field
    varnames = phi[0].varnames
    for j, p in enumerate(phi):
        if p.field != field:
            raise ValueError(f"phi_{j} is over {p.field!r}, expected {field!r}")
        if p.varnames != varnames:
            raise ValueError(f"phi_{j} uses variables {p.varnames}, expected {varnames}")
        if p.is_zero():
            raise ValueError(f"phi_{j} is the zero polynomial")
    if ord.nvars != len(varnames):
        raise ValueError(
            f"weight vector has {ord.nvars} entries for {len(varnames)} variables"
        )
    cols = [(1,) + p.leading_exponent(ord) for p in phi]
    seen = {}
    for j, c in enumerate(cols):
        if c in seen:
            raise ValueError(
                f"phi_{seen[c]} and phi_{j} share the leading exponent "
                f"{c[1:]}; the graded basis construction needs distinct "
                f"leading terms (reweight or combine the generators)"
            )
        seen[c] = j
    n = len(varnames)
    A = [[cols[j][i] for j in range(len(phi))] for i in range(n + 1)]
    return Parameterization(field, varnames, phi, ord, A)


@dataclass(frozen=True)
class GradedSupport:
    """The set d.A of d-element column sums of A, with one witness each.

    `points` is sorted by graded lex on the t-part; `witness` maps each
    point (for d >= 1) to a pair (gamma, i) with gamma in (d-1).A and
    gamma + alpha_i = point. `index` maps point -> position.
    """

    degree: int
    points: tuple
    witness: dict
    index: dict = dc_field(repr=False, default=None)

    def __len__(self):
        return len(self.points)


def graded_support(par: Parameterization, d: int) -> GradedSupport:
    if d < 0:
        raise ValueError(f"degree must be nonnegative, got {d}")
    cached = par._supports.get(d)
    if cached is not None:
        return cached
    if d == 0:
        zero = (0,) * (par.n + 1)
        sup = GradedSupport(0, (zero,), {}, {zero: 0})
    else:
        prev = graded_support(par, d - 1)
        cols = [par.column(j) for j in range(par.ell + 1)]
        witness = {}
        for gamma in prev.points:
            for i, alpha in enumerate(cols):
                beta = tuple(g + a for g, a in zip(gamma, alpha))
                if beta not in witness:
                    witness[beta] = (gamma, i)
        tb = par.ord.tiebreak_key
        points = tuple(sorted(witness, key=lambda b: tb(b[1:])))
        sup = GradedSupport(d, points, witness, {b: k for k, b in enumerate(points)})
    par._supports[d] = sup
    return sup


@dataclass(frozen=True)
class GradedBasis:
    """Basis elements b_{d,beta} aligned with GradedSupport.points."""

    degree: int
    elements: tuple  # of (beta, MultiPoly)

    def __len__(self):
        return len(self.elements)


def graded_basis(par: Parameterization, d: int) -> GradedBasis:
    """Products of d generators along the witness chains, one per point.

    b_{0,0} = 1 and b_{d,beta} = b_{d-1,gamma} * phi_i for the stored
    witness (gamma, i). The leading exponent of each element equals the
    t-part of its label.
    """
    cached = par._bases.get(d)
    if cached is not None:
        return cached
    sup = graded_support(par, d)
    if d == 0:
        one = MultiPoly.constant(par.field, par.varnames, par.field.one)
        basis = GradedBasis(0, ((sup.points[0], one),))
    else:
        prev = graded_basis(par, d - 1)
        prev_by_label = {beta: b for beta, b in prev.elements}
        elements = []
        for beta in sup.points:
            gamma, i = sup.witness[beta]
            b = prev_by_label[gamma] * par.phi[i]
            if b.leading_exponent(par.ord) != beta[1:]:
                raise AssertionError(
                    f"internal error: basis element for {beta} has leading "
                    f"exponent {b.leading_exponent(par.ord)}"
                )
            elements.append((beta, b))
        basis = GradedBasis(d, tuple(elements))
    par._bases[d] = basis
    return basis


@dataclass(frozen=True)
class SubductionResult:
    """Expansion g = sum coeffs[beta] * b_{d,beta} + remainder."""

    degree: int
    coeffs: dict
    remainder: MultiPoly

    def vector(self, support: GradedSupport):
        """Coefficients as a list aligned with support.points."""
        F = self.remainder.field
        return [self.coeffs.get(beta, F.zero) for beta in support.points]


def _subduction_positions(par, d):
    """Support positions sorted by the weight order on the t-part.

    Processing basis elements in this order makes subduction a single
    forward pass: eliminating a leading monomial only introduces
    monomials that come later in the order.
    """
    sup = graded_support(par, d)
    key = par.ord.key
    return sup, sorted(range(len(sup.points)), key=lambda p: key(sup.points[p][1:]))


def subduct(par: Parameterization, g: MultiPoly, d: int) -> SubductionResult:
    """Expand g in the degree-d graded basis, leaving a remainder.

    The remainder is zero exactly when g lies in the span of the degree-d
    basis; it never has support on a basis leading monomial.
    """
    if g.field != par.field or g.varnames != par.varnames:
        raise ValueError("polynomial is not over the parameterization's ring")
    F = par.field
    sup, positions = _subduction_positions(par, d)
    bas = graded_basis(par, d)
    terms = dict(g.terms)
    coeffs = {}
    for pos in positions:
        beta = sup.points[pos]
        mu = beta[1:]
        c = terms.get(mu)
        if c is None or c == F.zero:
            continue
        b = bas.elements[pos][1]
        coef = F.div(c, b.terms[mu])
        coeffs[beta] = coef
        for e, v in b.terms.items():
            s = F.sub(terms.get(e, F.zero), F.mul(coef, v))
            if s == F.zero:
                terms.pop(e, None)
            else:
                terms[e] = s
    remainder = MultiPoly(F, par.varnames, terms, _normalized=True)
    return SubductionResult(d, coeffs, remainder)


def witness_monomial(par: Parameterization, d: int, beta) -> tuple:
    """Generator exponent vector of the witness chain for beta in d.A.

    Returns e over indices 0..ell with sum(e) = d and sum e_j alpha_j =
    beta, so b_{d,beta} = prod phi_j**e_j.
    """
    beta = tuple(beta)
    e = [0] * (par.ell + 1)
    for dd in range(d, 0, -1):
        sup = graded_support(par, dd)
        if beta not in sup.witness:
            raise KeyError(f"{beta} is not in {dd}.A")
        gamma, i = sup.witness[beta]
        e[i] += 1
        beta = gamma
    return tuple(e)


@dataclass(frozen=True)
class DegreeCheck:
    degree: int
    expected: int  # |d.A|
    rank: int
    passed: bool
    new_leading_exponents: tuple


@dataclass(frozen=True)
class KhovanskiiReport:
    dmax: int
    degrees: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.degrees)

    def first_failure(self):
        for c in self.degrees:
            if not c.passed:
                return c
        return None


def check_khovanskii_truncated(par: Parameterization, dmax: int) -> KhovanskiiReport:
    """Degree-truncated Khovanskii-basis verification.

    For each d <= dmax the span of all degree-d products of the generators
    must have dimension |d.A|. Products are enumerated as b_{d-1,gamma} *
    phi_i and expanded by subduction; the rank of the span equals |d.A|
    plus the rank of the nonzero remainders (remainders have no support
    on basis leading monomials, so the two spans only meet in zero). A
    failure stops the scan since higher-degree bases are then unreliable.
    """
    if dmax < 1:
        raise ValueError(f"dmax must be at least 1, got {dmax}")
    F = par.field
    checks = []
    for d in range(1, dmax + 1):
        expected = len(graded_support(par, d))
        prev = graded_support(par, d - 1)
        remainders = []
        for gamma in prev.points:
            bprev = graded_basis(par, d - 1)
            b = bprev.elements[prev.index[gamma]][1]
            for i in range(par.ell + 1):
                res = subduct(par, b * par.phi[i], d)
                if not res.remainder.is_zero():
                    remainders.append(res.remainder)
        if remainders:
            monomials = sorted(
                {e for r in remainders for e in r.terms}, key=par.ord.key
            )
            colpos = {e: j for j, e in enumerate(monomials)}
            rows = []
            for r in remainders:
                row = [F.zero] * len(monomials)
                for e, c in r.terms.items():
                    row[colpos[e]] = c
                rows.append(row)
            extra = linalg.rank(rows, F)
            leads = tuple(
                sorted({r.leading_exponent(par.ord) for r in remainders},
                       key=par.ord.key)
            )
        else:
            extra = 0
            leads = ()
        rank = expected + extra
        checks.append(DegreeCheck(d, expected, rank, extra == 0, leads))
        if extra:
            break
    return KhovanskiiReport(dmax, tuple(checks))
