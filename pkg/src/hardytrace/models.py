"""Truncated Hardy-space models with exact matrix elements.

Two concrete graded bases are provided: monomials on the sphere (the full
Hardy space of the unit ball) and bihomogeneous monomial pairs on the
rank-one boundary manifold of a rectangular matrix domain.  Toeplitz
compressions, the grading operator and the sub-Toeplitz multiplier form are
assembled as sparse matrices over exact rationals; floating point enters
only when an operator is exported for spectral work.

Every operator records ``valid_degree``: rows/columns supported on levels
up to that degree coincide with the untruncated operator, everything above
is truncation-contaminated and must be sliced away by spectral consumers.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .catalog import DomainDescriptor
from .errors import BasisMismatchError, ParameterDomainError, SymbolDomainError
from .partitions import rising_pochhammer
from .symbols import SymbolPolynomial, is_sphere_balanced, restrict_rank_one

MultiIndex = tuple[int, ...]


def _multiindices(nvars: int, weight: int) -> list[MultiIndex]:
    """All exponent vectors of given total weight, lexicographic order."""
    if nvars == 1:
        return [(weight,)]
    out = []
    for first in range(weight, -1, -1):
        for rest in _multiindices(nvars - 1, weight - first):
            out.append((first,) + rest)
    return out


def _factorial_multi(mu: MultiIndex) -> int:
    out = 1
    for e in mu:
        out *= math.factorial(e)
    return out


def sphere_monomial_norm_sq(mu: MultiIndex, dim: int) -> Fraction:
    """Uniform-measure norm square of z^mu on the unit sphere of C^dim:
    mu! (dim-1)! / (|mu|+dim-1)!."""
    m = sum(mu)
    return Fraction(_factorial_multi(mu) * math.factorial(dim - 1),
                    math.factorial(m + dim - 1))


class GradedBasis:
    """Orthogonal graded monomial basis with exact norms.

    kind "ball":      labels are multi-indices alpha, level |alpha|
    kind "rank-one":  labels are pairs (alpha, beta) with |alpha| = |beta|
    """

    def __init__(self, kind: str, params: tuple[int, ...], truncation: int):
        self.kind = kind
        self.params = params
        self.truncation = truncation
        self.labels: list = []
        self.norm_sq: list[Fraction] = []
        self.level_of: list[int] = []
        self.level_start: list[int] = []
        if kind == "ball":
            (d,) = params
            self.nvars = d
            for m in range(truncation + 1):
                self.level_start.append(len(self.labels))
                for alpha in _multiindices(d, m):
                    self.labels.append(alpha)
                    self.norm_sq.append(sphere_monomial_norm_sq(alpha, d))
                    self.level_of.append(m)
        elif kind == "rank-one":
            r, s = params
            self.nvars = r + s
            for m in range(truncation + 1):
                self.level_start.append(len(self.labels))
                for alpha in _multiindices(r, m):
                    na = sphere_monomial_norm_sq(alpha, r)
                    for beta in _multiindices(s, m):
                        self.labels.append((alpha, beta))
                        self.norm_sq.append(na * sphere_monomial_norm_sq(beta, s))
                        self.level_of.append(m)
        else:
            raise ParameterDomainError(f"unknown basis kind {kind!r}")
        self.level_start.append(len(self.labels))
        self.index = {lab: i for i, lab in enumerate(self.labels)}

    def __len__(self) -> int:
        return len(self.labels)

    def size(self) -> int:
        return len(self.labels)

    def level_dimension(self, m: int) -> int:
        return self.level_start[m + 1] - self.level_start[m]

    def level_range(self, m: int) -> range:
        return range(self.level_start[m], self.level_start[m + 1])

    def exponents(self, i: int) -> MultiIndex:
        """Label as an exponent vector over the symbol coordinates."""
        if self.kind == "ball":
            return self.labels[i]
        alpha, beta = self.labels[i]
        return alpha + beta


def build_ball_model(d: int, truncation: int) -> GradedBasis:
    """Hardy-space monomial basis of the unit ball of C^d up to degree M."""
    if d < 1 or truncation < 0:
        raise ParameterDomainError("need d >= 1 and truncation >= 0")
    return GradedBasis("ball", (d,), truncation)


def build_rank_one_model(r: int, s: int, truncation: int) -> GradedBasis:
    """Basis of the Hardy space over the rank-one boundary manifold of the
    r x s matrix domain: bihomogeneous pairs xi^alpha eta^beta with
    |alpha| = |beta| = m, normed by the product of sphere measures."""
    if not (1 <= r <= s) or truncation < 0:
        raise ParameterDomainError("need 1 <= r <= s and truncation >= 0")
    return GradedBasis("rank-one", (r, s), truncation)


class TruncatedOperator:
    """Sparse matrix on a graded basis, in unnormalized monomial coordinates.

    ``entries[(i, j)]`` is the coefficient of basis vector i in the image of
    basis vector j.  The basis is orthogonal but not orthonormal, so the
    adjoint rescales by norm squares; conversion to the orthonormal picture
    happens in ``to_orthonormal_dense``.
    """

    def __init__(self, basis: GradedBasis, entries: dict, valid_degree: int):
        self.basis = basis
        self.entries = {k: v for k, v in entries.items() if v != 0}
        self.valid_degree = valid_degree

    # -- bookkeeping ---------------------------------------------------------

    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.entries.values())

    def shift_range(self) -> tuple[int, int]:
        if not self.entries:
            return (0, 0)
        lv = self.basis.level_of
        shifts = [lv[i] - lv[j] for (i, j) in self.entries]
        return (min(shifts), max(shifts))

    def entry(self, i: int, j: int):
        return self.entries.get((i, j), Fraction(0))

    def _check_basis(self, other: "TruncatedOperator") -> None:
        if self.basis is not other.basis:
            raise BasisMismatchError("operators live on different bases")

    # -- algebra ---------------------------------------------------------------

    def __add__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        self._check_basis(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            w = out.get(k, 0) + v
            if w == 0:
                out.pop(k, None)
            else:
                out[k] = w
        return TruncatedOperator(self.basis, out,
                                 min(self.valid_degree, other.valid_degree))

    def __sub__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        return self + (-1) * other

    def __mul__(self, c):
        return TruncatedOperator(self.basis,
                                 {k: v * c for k, v in self.entries.items()},
                                 self.valid_degree)

    __rmul__ = __mul__

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        self._check_basis(other)
        by_col: dict[int, list] = {}
        for (i, k), v in self.entries.items():
            by_col.setdefault(k, []).append((i, v))
        out: dict = {}
        for (k, j), w in other.entries.items():
            for i, v in by_col.get(k, ()):
                key = (i, j)
                acc = out.get(key, 0) + v * w
                if acc == 0:
                    out.pop(key, None)
                else:
                    out[key] = acc
        raise_amount = max(self.shift_range()[1], other.shift_range()[1], 0)
        valid = min(self.valid_degree, other.valid_degree) - raise_amount
        return TruncatedOperator(self.basis, out, valid)

    def adjoint(self) -> "TruncatedOperator":
        ns = self.basis.norm_sq
        out = {}
        for (i, j), v in self.entries.items():
            w = v.conjugate() if isinstance(v, complex) else v
            out[(j, i)] = w * ns[i] / ns[j]
        return TruncatedOperator(self.basis, out, self.valid_degree)

    def commutator(self, other: "TruncatedOperator") -> "TruncatedOperator":
        return self @ other - other @ self

    # -- export ---------------------------------------------------------------

    def to_orthonormal_dense(self, max_level: int | None = None) -> np.ndarray:
        """Dense matrix w.r.t. the orthonormalized basis, restricted to
        levels <= max_level (defaults to the valid degree)."""
        if max_level is None:
            max_level = self.valid_degree
        max_level = min(max_level, self.basis.truncation)
        if max_level < 0:
            raise ParameterDomainError("empty valid block")
        n = self.basis.level_start[max_level + 1]
        complex_entries = any(isinstance(v, complex) for v in self.entries.values())
        out = np.zeros((n, n), dtype=complex if complex_entries else float)
        ns = self.basis.norm_sq
        for (i, j), v in self.entries.items():
            if i < n and j < n:
                out[i, j] = (complex(v) if complex_entries else float(v)) \
                    * math.sqrt(ns[i] / ns[j])
        return out

    def level_block(self, m_row: int, m_col: int) -> np.ndarray:
        """Dense orthonormalized block mapping level m_col to level m_row."""
        rows = self.basis.level_range(m_row)
        cols = self.basis.level_range(m_col)
        out = np.zeros((len(rows), len(cols)), dtype=complex)
        ns = self.basis.norm_sq
        for (i, j), v in self.entries.items():
            if i in rows and j in cols:
                out[i - rows.start, j - cols.start] = complex(v) * math.sqrt(ns[i] / ns[j])
        return out


def zero_operator(basis: GradedBasis) -> TruncatedOperator:
    return TruncatedOperator(basis, {}, basis.truncation)


def identity_operator(basis: GradedBasis) -> TruncatedOperator:
    return TruncatedOperator(basis, {(i, i): Fraction(1) for i in range(len(basis))},
                             basis.truncation)


def lambda_operator(basis: GradedBasis) -> TruncatedOperator:
    """Grading operator: multiplication by the level m."""
    ent = {(i, i): Fraction(basis.level_of[i]) for i in range(len(basis))
           if basis.level_of[i] != 0}
    return TruncatedOperator(basis, ent, basis.truncation)


def lambda_resolvent(basis: GradedBasis, shift: Fraction | int = 1) -> TruncatedOperator:
    """Diagonal operator 1/(m + shift) on level m."""
    ent = {(i, i): Fraction(1, 1) / (basis.level_of[i] + Fraction(shift))
           for i in range(len(basis))}
    return TruncatedOperator(basis, ent, basis.truncation)


def _coerce_symbol(basis: GradedBasis, f: SymbolPolynomial,
                   coords: str = "matrix") -> SymbolPolynomial:
    """Bring a symbol into the basis coordinate system, validating balance
    for rank-one models.  ``coords`` says how a rank-one symbol is written:
    "matrix" for the r*s ambient entries, "sphere" for the r+s boundary
    coordinates."""
    if basis.kind == "ball":
        if f.nvars != basis.nvars:
            raise SymbolDomainError(f"symbol has {f.nvars} variables, model has {basis.nvars}")
        return f
    r, s = basis.params
    if coords == "matrix":
        if f.nvars != r * s:
            raise SymbolDomainError(f"expected {r * s} matrix coordinates, got {f.nvars}")
        f = restrict_rank_one(f, r, s)
    elif coords == "sphere":
        if f.nvars != r + s:
            raise SymbolDomainError(f"expected {r + s} sphere coordinates, got {f.nvars}")
    else:
        raise SymbolDomainError(f"unknown coordinate system {coords!r}")
    if not is_sphere_balanced(f, r):
        raise SymbolDomainError("symbol is not balanced on the rank-one manifold")
    return f


def matrix_symbol(basis: GradedBasis, f: SymbolPolynomial,
                  coords: str = "matrix") -> SymbolPolynomial:
    """Public wrapper for the coordinate coercion used by ``toeplitz_matrix``."""
    return _coerce_symbol(basis, f, coords)


def toeplitz_matrix(basis: GradedBasis, f: SymbolPolynomial,
                    coords: str = "matrix") -> TruncatedOperator:
    """Compression of multiplication by ``f`` to the truncated model.

    Entries are exact monomial moments of the boundary measure.  For
    rank-one models the symbol must descend to the boundary manifold
    (sphere-balanced); matrix-coordinate symbols are restricted first and
    are always balanced.
    """
    f = _coerce_symbol(basis, f, coords)
    M = basis.truncation
    ent: dict = {}
    if basis.kind == "ball":
        (d,) = basis.params
        for j, beta in enumerate(basis.labels):
            for (gam, dl), c in f.terms.items():
                alpha = tuple(b + g - dd for b, g, dd in zip(beta, gam, dl))
                if any(x < 0 for x in alpha) or sum(alpha) > M:
                    continue
                i = basis.index[alpha]
                up = tuple(b + g for b, g in zip(beta, gam))
                val = c * sphere_monomial_norm_sq(up, d) / basis.norm_sq[i]
                acc = ent.get((i, j), 0) + val
                if acc == 0:
                    ent.pop((i, j), None)
                else:
                    ent[(i, j)] = acc
    else:
        r, s = basis.params
        for j, (A, B) in enumerate(basis.labels):
            for (gam, dl), c in f.terms.items():
                g1, g2 = gam[:r], gam[r:]
                d1, d2 = dl[:r], dl[r:]
                A2 = tuple(x + y - z for x, y, z in zip(A, g1, d1))
                B2 = tuple(x + y - z for x, y, z in zip(B, g2, d2))
                if any(x < 0 for x in A2 + B2) or sum(A2) > M:
                    continue
                i = basis.index[(A2, B2)]
                val = c * sphere_monomial_norm_sq(
                    tuple(x + y for x, y in zip(A, g1)), r)
                val *= sphere_monomial_norm_sq(
                    tuple(x + y for x, y in zip(B, g2)), s)
                val /= basis.norm_sq[i]
                acc = ent.get((i, j), 0) + val
                if acc == 0:
                    ent.pop((i, j), None)
                else:
                    ent[(i, j)] = acc
    return TruncatedOperator(basis, ent, M - f.degree)


def unitary_weight(desc: DomainDescriptor, m: int) -> Fraction:
    """Norm transfer weight between the graded Hardy components and the
    rank-one boundary model: (r a/2)_m / (a/2)_m."""
    if m < 0:
        raise ParameterDomainError("m must be nonnegative")
    half = Fraction(desc.a, 2)
    return Fraction(rising_pochhammer(desc.r * half, m)) / rising_pochhammer(half, m)


def level_multiplier_sq(basis: GradedBasis) -> list[Fraction]:
    """Squared diagonal multiplier (m + r a/2)/(m + a/2) per level, with the
    rectangular-domain value a = 2."""
    if basis.kind != "rank-one":
        raise ParameterDomainError("multiplier is defined on rank-one models")
    r, _ = basis.params
    return [Fraction(m + r, m + 1) for m in range(basis.truncation + 1)]


def _validate_linear_symbol(basis: GradedBasis, u: SymbolPolynomial) -> SymbolPolynomial:
    """Check that u is a linear holomorphic matrix-coordinate symbol and
    restrict it to the sphere coordinates (bidegree (1,1) per term)."""
    if not u.is_holomorphic() or u.is_zero() or \
            max(sum(a) for (a, _) in u.terms) != 1:
        raise SymbolDomainError("expected a linear holomorphic coordinate symbol")
    return _coerce_symbol(basis, u, "matrix")


def sub_toeplitz_parts(basis: GradedBasis, u: SymbolPolynomial
                       ) -> tuple[TruncatedOperator, list[Fraction]]:
    """Exact ingredients of the transported sub-Toeplitz operator for a
    linear symbol: the plain Toeplitz matrix and the squared level
    multiplier.  The operator itself is their composition with the square
    root of the multiplier."""
    u = _validate_linear_symbol(basis, u)
    return toeplitz_matrix(basis, u, "sphere"), level_multiplier_sq(basis)


def sub_toeplitz_linear(basis: GradedBasis, u: SymbolPolynomial) -> TruncatedOperator:
    """Transported sub-Toeplitz operator for a linear symbol: the model
    Toeplitz matrix composed with the diagonal sqrt((m+r)/(m+1)) on level m.

    Entries are floats (the multiplier is irrational); use
    ``sub_toeplitz_parts`` for exact rational identities.
    """
    t_op, mult_sq = sub_toeplitz_parts(basis, u)
    lv = basis.level_of
    ent = {key: float(v) * math.sqrt(mult_sq[lv[key[1]]])
           for key, v in t_op.entries.items()}
    return TruncatedOperator(basis, ent, t_op.valid_degree)


def derivative_operator(basis: GradedBasis, k: int) -> TruncatedOperator:
    """Directional derivative along coordinate k on a ball model:
    z^beta -> beta_k z^(beta - e_k)."""
    if basis.kind != "ball":
        raise ParameterDomainError("derivative operator implemented on ball models")
    ent: dict = {}
    for j, beta in enumerate(basis.labels):
        if beta[k] > 0:
            target = beta[:k] + (beta[k] - 1,) + beta[k + 1:]
            ent[(basis.index[target], j)] = Fraction(beta[k])
    return TruncatedOperator(basis, ent, basis.truncation)


def sub_toeplitz_commutator(basis: GradedBasis, u: SymbolPolynomial,
                            v: SymbolPolynomial | None = None) -> TruncatedOperator:
    """Exact rational commutator [S_u, S_v^*] of transported sub-Toeplitz
    operators with linear symbols.

    The square roots cancel levelwise: S_u S_v^* = T_u M^2 T_v^* and
    S_v^* S_u picks up the squared multiplier on its (level-preserving)
    diagonal blocks, so the result is exactly rational.
    """
    if v is None:
        v = u
    t_u, mult_sq = sub_toeplitz_parts(basis, u)
    t_v = toeplitz_matrix(basis, _validate_linear_symbol(basis, v), "sphere")
    t_v_adj = t_v.adjoint()
    lv = basis.level_of
    m2_tv_adj = TruncatedOperator(
        basis, {(i, j): mult_sq[lv[i]] * val for (i, j), val in t_v_adj.entries.items()},
        t_v_adj.valid_degree)
    first = t_u @ m2_tv_adj
    x = t_v_adj @ t_u
    second = TruncatedOperator(
        basis, {(i, j): mult_sq[lv[i]] * val for (i, j), val in x.entries.items()},
        x.valid_degree)
    out = first - second
    return TruncatedOperator(basis, out.entries, basis.truncation - 2)
