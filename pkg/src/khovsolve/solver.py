"""Nullspaces, multiplication matrices and eigenvalue extraction.

The pipeline: build the KM matrix at a degree dreg such that dreg-1 and
dreg are both regular for the ideal, take its exact right kernel N, form
the multiplication matrices M_j = (N_h)|B^-1 (N_{x_j})|B for a random
linear form h, and read off the solutions as joint eigenvalues. The
eigenvalue of M_j at a solution z is x_j(z)/h(z), so the rows of the
output are homogeneous coordinates.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .fields import QQ, PrimeField
from .hilbert import (
    hilbert_function,
    hilbert_numerator,
    regularity_bound,
)
from .khov import graded_basis, graded_support, subduct
from .km import KMMatrix, StructuredSystem, km_matrix

__all__ = [
    "SolverError",
    "UnsupportedFieldError",
    "KernelBasis",
    "kernel_basis",
    "MultiplicationSystem",
    "multiplication_matrices",
    "SolutionSet",
    "extract_solutions",
    "solve",
    "residuals",
    "brute_force_affine",
    "normalize_solutions",
]


class SolverError(RuntimeError):
    pass


class UnsupportedFieldError(SolverError):
    pass


@dataclass(frozen=True)
class KernelBasis:
    """Rows span the exact right kernel of a KM matrix."""

    degree: int
    N: tuple  # delta' rows of length HF(degree)
    col_labels: tuple

    @property
    def nullity(self) -> int:
        return len(self.N)


def kernel_basis(M: KMMatrix, field=None) -> KernelBasis:
    if field is None:
        field = M.field
    if field is None:
        raise ValueError("KM matrix carries no field; pass one explicitly")
    vecs = linalg.kernel([list(r) for r in M.entries], field, len(M.col_labels))
    return KernelBasis(M.degree, tuple(tuple(v) for v in vecs), M.col_labels)


@dataclass(frozen=True)
class MultiplicationSystem:
    """Commuting matrices M_0..M_ell with sum c_j M_j = identity."""

    delta: int
    h_coeffs: tuple
    B_cols: tuple  # selected degree-d basis labels
    mats: tuple  # ell+1 matrices, delta x delta
    e: int
    seed: int
    degree: int  # the lower degree d (kernel taken at d+1)


def _expansion_columns(sys: StructuredSystem, d: int):
    """For each generator j, the HF(d) x HF(d+1) expansion matrix of
    multiplication by phi_j from degree d to degree d+1."""
    par = sys.par
    sup_d = graded_support(par, d)
    sup_up = graded_support(par, d + 1)
    bas_d = graded_basis(par, d)
    tables = []
    for j in range(par.ell + 1):
        rows = []
        for pos, (beta, b) in enumerate(bas_d.elements):
            res = subduct(par, b * par.phi[j], d + 1)
            if not res.remainder.is_zero():
                raise SolverError(
                    f"generator product left the graded algebra at degree "
                    f"{d + 1}; the Khovanskii property fails"
                )
            rows.append(res.vector(sup_up))
        tables.append(rows)
    return sup_d, tables


def multiplication_matrices(
    sys: StructuredSystem, N: KernelBasis, d: int, seed: int = 0, retries: int = 5
) -> MultiplicationSystem:
    """Multiplication matrices from a kernel basis at degree d+1.

    N_{x_j}[:, gamma] applies N to the expansion of b_{d,gamma} * phi_j,
    h is a random linear form in the generators, B is the leftmost set of
    delta independent columns of N_h, and M_j = (N_h)|B^-1 (N_{x_j})|B.
    """
    par = sys.par
    field = par.field
    if N.degree != d + 1:
        raise ValueError(f"kernel basis is at degree {N.degree}, expected {d + 1}")
    delta = N.nullity
    if delta == 0:
        raise SolverError("kernel is trivial; the system has no solutions on X")
    sup_d, tables = _expansion_columns(sys, d)
    nd = len(sup_d.points)

    # N_xj[r][g] = sum_beta N[r][beta] * expansion[g][beta]
    Nx = []
    for j in range(par.ell + 1):
        T = tables[j]
        mat = []
        for r in range(delta):
            Nr = N.N[r]
            row = []
            for g in range(nd):
                s = field.zero
                exp = T[g]
                for bpos, c in enumerate(exp):
                    if c != field.zero and Nr[bpos] != field.zero:
                        s = field.add(s, field.mul(c, Nr[bpos]))
                row.append(s)
            mat.append(row)
        Nx.append(mat)

    rng = random.Random(seed)
    last_err = None
    for _ in range(retries):
        if field == QQ:
            c = [field.from_int(rng.randint(1, 2 * delta * delta + 1))
                 for _ in range(par.ell + 1)]
        else:
            c = []
            for _ in range(par.ell + 1):
                x = rng.randrange(field.modulus)
                while x == 0:
                    x = rng.randrange(field.modulus)
                c.append(x)
        Nh = [[field.zero] * nd for _ in range(delta)]
        for j, cj in enumerate(c):
            mj = Nx[j]
            for r in range(delta):
                for g in range(nd):
                    if mj[r][g] != field.zero:
                        Nh[r][g] = field.add(Nh[r][g], field.mul(cj, mj[r][g]))
        B = linalg.first_independent_columns(Nh, field, count=delta)
        if len(B) < delta:
            last_err = SolverError(
                "h vanishes on a solution or delta overcounted: N_h has "
                f"rank {len(B)} < {delta}"
            )
            continue
        NhB = [[Nh[r][g] for g in B] for r in range(delta)]
        inv = linalg.invert(NhB, field)
        mats = []
        for j in range(par.ell + 1):
            NxB = [[Nx[j][r][g] for g in B] for r in range(delta)]
            mats.append(linalg.matmul(inv, NxB, field))
        ident = linalg.identity(delta, field)
        acc = [[field.zero] * delta for _ in range(delta)]
        for j, cj in enumerate(c):
            for r in range(delta):
                for s_ in range(delta):
                    acc[r][s_] = field.add(
                        acc[r][s_], field.mul(cj, mats[j][r][s_])
                    )
        if acc != ident:
            raise SolverError("internal error: sum c_j M_j is not the identity")
        for j in range(len(mats)):
            for k in range(j + 1, len(mats)):
                if linalg.matmul(mats[j], mats[k], field) != linalg.matmul(
                    mats[k], mats[j], field
                ):
                    raise SolverError(
                        f"multiplication matrices {j} and {k} do not "
                        f"commute: degrees not in the regularity set or "
                        f"the solution scheme is non-reduced"
                    )
        return MultiplicationSystem(
            delta=delta,
            h_coeffs=tuple(c),
            B_cols=tuple(sup_d.points[g] for g in B),
            mats=tuple(tuple(tuple(r) for r in m) for m in mats),
            e=1,
            seed=seed,
            degree=d,
        )
    raise last_err


@dataclass(frozen=True)
class SolutionSet:
    """Rows are homogeneous coordinates x_j(z)/h(z) of the solutions."""

    coords: tuple  # delta rows of ell+1 complex numbers
    residuals: tuple
    diagnostics: dict = dc_field(default_factory=dict)

    def __len__(self):
        return len(self.coords)


def extract_solutions(
    ms: MultiplicationSystem, seed: int = 0, tol: float = 1e-6, retries: int = 5
) -> SolutionSet:
    """Joint eigenvalues of the multiplication matrices, over QQ only.

    A single random real combination T of the matrices is diagonalized
    numerically; its eigenvector matrix simultaneously (approximately)
    diagonalizes every M_j, and coordinate j of solution i is the i-th
    diagonal entry of V^-1 M_j V.
    """
    first = ms.mats[0][0][0] if ms.delta else None
    if isinstance(first, int):
        raise UnsupportedFieldError(
            "eigenvalue extraction needs rational coefficients; over a "
            "finite field use the multiplication matrices directly or the "
            "brute-force oracle"
        )
    mats = [np.array([[float(x) for x in row] for row in m]) for m in ms.mats]
    delta = ms.delta
    scale = max(1.0, max(np.abs(m).max() for m in mats))
    rng = random.Random(seed)
    clustered = True
    for _ in range(retries):
        r = [rng.random() for _ in mats]
        T = sum(rj * m for rj, m in zip(r, mats))
        w, V = np.linalg.eig(T)
        gap = min(
            (abs(w[i] - w[k]) for i in range(delta) for k in range(i + 1, delta)),
            default=np.inf,
        )
        if gap > 1e-8 * max(1.0, np.abs(w).max()):
            clustered = False
            break
    if clustered:
        warnings.warn(
            "eigenvalues of the random combination stay clustered after "
            f"{retries} draws; the solution scheme is possibly non-reduced",
            stacklevel=2,
        )
    coords = np.empty((delta, len(mats)), dtype=complex)
    offdiag = 0.0
    for j, m in enumerate(mats):
        D = np.linalg.solve(V, m @ V)
        coords[:, j] = np.diag(D)
        if delta > 1:
            off = D - np.diag(np.diag(D))
            offdiag = max(offdiag, float(np.abs(off).max()))
    comm = 0.0
    for j in range(len(mats)):
        for k in range(j + 1, len(mats)):
            comm = max(
                comm, float(np.abs(mats[j] @ mats[k] - mats[k] @ mats[j]).max())
            )
    real_flags = tuple(
        bool(np.all(np.abs(row.imag) <= 1e-8 * (1.0 + np.abs(row).max())))
        for row in coords
    )
    diagnostics = {
        "offdiagonal": offdiag,
        "offdiagonal_relative": offdiag / scale,
        "commutator_float": comm,
        "real": real_flags,
        "eigen_gap_clustered": clustered,
    }
    if offdiag / scale > tol:
        warnings.warn(
            f"joint diagonalization off-diagonal residue {offdiag / scale:.3e} "
            f"exceeds {tol:.1e}",
            stacklevel=2,
        )
    return SolutionSet(
        coords=tuple(tuple(row) for row in coords),
        residuals=(),
        diagnostics=diagnostics,
    )


def normalize_solutions(coords, mode: str = "raw"):
    """Normalize homogeneous coordinate rows.

    "raw" leaves the x_j(z)/h(z) values; "first" divides each row by its
    first coordinate (error if one vanishes numerically).
    """
    if mode == "raw":
        return [list(row) for row in coords]
    if mode != "first":
        raise ValueError(f"unknown normalization {mode!r}")
    out = []
    for i, row in enumerate(coords):
        scale_row = max(abs(x) for x in row)
        if abs(row[0]) <= 1e-12 * max(1.0, scale_row):
            raise ValueError(
                f"solution {i} has (numerically) vanishing first coordinate; "
                f"use raw normalization"
            )
        out.append([x / row[0] for x in row])
    return out


def residuals(sys: StructuredSystem, coords) -> tuple:
    """Scaled homogeneous backward errors, one per solution row.

    residual = max_i |sum_a c_{i,a} x^a| / (|c_i|_2 * |x|_2^{d_i}), using
    the coefficient form of each equation (derived by subduction when
    absent).
    """
    forms = [sys.coefficient_form(i) for i in range(len(sys.equations))]
    F = sys.par.field
    if F != QQ:
        raise UnsupportedFieldError("residuals need rational coefficients")
    out = []
    for row in coords:
        x = [complex(v) for v in row]
        xnorm = np.sqrt(sum(abs(v) ** 2 for v in x))
        worst = 0.0
        for i, form in enumerate(forms):
            val = 0j
            cnorm2 = 0.0
            for alpha, c in form.items():
                cf = float(c)
                cnorm2 += cf * cf
                term = cf
                for j, a in enumerate(alpha):
                    if a:
                        term = term * x[j] ** a
                val += term
            denom = np.sqrt(cnorm2) * xnorm ** sys.equations[i].degree
            worst = max(worst, abs(val) / denom if denom else abs(val))
        out.append(float(worst))
    return tuple(out)


def _default_dreg(sys: StructuredSystem):
    par = sys.par
    n = par.n
    degrees = sys.degrees
    dmax = n + 2
    cap = sum(degrees) + n + 10
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        hd = hilbert_numerator(par, dmax)
        while not hd.certified and dmax < cap:
            dmax = min(cap, 2 * dmax)
            hd = hilbert_numerator(par, dmax)
    if not hd.certified:
        warnings.warn("using an uncertified Hilbert regularity", stacklevel=3)
    return regularity_bound(hd.hreg, degrees, n=n) + 1


def _adaptive_dreg(sys: StructuredSystem, reduce: bool):
    """Smallest d with equal KM nullity at d and d+1 (heuristic)."""
    par = sys.par
    degrees = sys.degrees
    cap = sum(degrees) + 10
    d = max(degrees) + 1
    prev = None
    while d <= cap:
        M = km_matrix(sys, d, reduce=reduce)
        rk = len(M.entries) if M.reduced else linalg.rank(
            [list(r) for r in M.entries], par.field
        )
        nullity = hilbert_function(par, d) - rk
        if prev is not None and nullity == prev and nullity > 0:
            return d
        prev = nullity
        d += 1
    raise SolverError(
        f"nullity did not stabilize up to degree {cap}: the solution set "
        f"is positive-dimensional or the system is irregular"
    )


def solve(
    sys: StructuredSystem,
    dreg=None,
    seed: int = 0,
    adaptive: bool = False,
    reduce: bool = True,
    normalize: str = "raw",
) -> SolutionSet:
    """End-to-end solve; see module docstring for the pipeline."""
    par = sys.par
    s = len(sys.equations)
    if s == 0:
        raise SolverError("no equations given")
    if dreg is None:
        if s == par.n and not adaptive:
            dreg = _default_dreg(sys)
        elif adaptive:
            dreg = _adaptive_dreg(sys, reduce)
        else:
            raise SolverError(
                f"got {s} equations on a {par.n}-dimensional variety; the "
                f"regularity bound needs s = n. Pass dreg explicitly or "
                f"enable the adaptive degree search"
            )
    if dreg < max(sys.degrees) + 1:
        raise SolverError(
            f"dreg = {dreg} leaves no room for the degree shift; need at "
            f"least {max(sys.degrees) + 1}"
        )
    M = km_matrix(sys, dreg, reduce=reduce)
    N = kernel_basis(M)
    ms = multiplication_matrices(sys, N, dreg - 1, seed=seed)
    if isinstance(par.field, PrimeField):
        raise UnsupportedFieldError(
            "eigenvalue extraction is unsupported over finite fields; "
            "use multiplication_matrices and brute_force_affine instead"
        )
    sols = extract_solutions(ms, seed=seed)
    coords = normalize_solutions(sols.coords, normalize)
    res = residuals(sys, sols.coords)
    diagnostics = dict(sols.diagnostics)
    diagnostics.update(
        {
            "dreg": dreg,
            "delta": ms.delta,
            "nullity": N.nullity,
            "km_shape": M.shape,
            "seed": seed,
            "h_coeffs": ms.h_coeffs,
        }
    )
    return SolutionSet(
        coords=tuple(tuple(row) for row in coords),
        residuals=res,
        diagnostics=diagnostics,
    )


def brute_force_affine(sys: StructuredSystem, max_modulus: int = 10_000):
    """Exhaustive affine solution scan over a small prime field.

    Returns all t in F_p^n with every equation vanishing exactly. Only
    sensible for p <= 10**4 and n <= 3.
    """
    par = sys.par
    F = par.field
    if not isinstance(F, PrimeField):
        raise UnsupportedFieldError("brute force scan needs a finite field")
    p = F.modulus
    if p > max_modulus:
        raise ValueError(f"modulus {p} too large for exhaustive scan")
    if par.n > 3:
        raise ValueError(f"dimension {par.n} too large for exhaustive scan")
    import itertools

    hits = []
    polys = [eq.f for eq in sys.equations]
    for point in itertools.product(range(p), repeat=par.n):
        if all(f.evaluate(point) == 0 for f in polys):
            hits.append(point)
    return hits
