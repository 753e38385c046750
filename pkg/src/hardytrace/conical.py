"""Closed-form norm, dimension and coefficient formulas for conical
polynomials.

All results are exact rationals.  The boundary norm squares, representation
dimensions and the shift coefficients acting along the conical line are all
finite Pochhammer products in the invariants (r, a, b); the ratio variants
evaluate quotients of such products with work independent of the partition
weight, which keeps large-weight asymptotic sampling cheap.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .catalog import DomainDescriptor
from .errors import InternalConsistencyError, ParameterDomainError, SymbolDomainError, UnsupportedFamilyError
from .partitions import (Partition, Rational, falling_pochhammer,
                         multivariate_pochhammer, pochhammer_quotient,
                         rising_pochhammer, subtract_block)
from .symbols import SymbolPolynomial, matrix_index


class ConicalContext:
    """Bundles a domain descriptor with the derived rational constants."""

    def __init__(self, desc: DomainDescriptor):
        self.desc = desc

    @property
    def r(self) -> int:
        return self.desc.r

    @property
    def a(self) -> int:
        return self.desc.a

    @property
    def b(self) -> int:
        return self.desc.b

    @property
    def rho(self) -> Fraction:
        return self.desc.rho

    def _check_length(self, lam: Partition) -> None:
        if lam.length > self.r:
            raise ParameterDomainError(
                f"partition {lam} longer than rank {self.r}")


def conical_norm_sq(ctx: ConicalContext, lam: Partition) -> Fraction:
    """Boundary norm square of the conical polynomial attached to ``lam``:

        (rho-b)_lam / (rho)_lam
          * prod_{i<j} (1+(a/2)(j-i-1))_{l_i-l_j} / (1+(a/2)(j-i))_{l_i-l_j}
    """
    ctx._check_length(lam)
    r, a, b = ctx.r, ctx.a, ctx.b
    out = Fraction(multivariate_pochhammer(ctx.rho - b, lam, a))
    out /= multivariate_pochhammer(ctx.rho, lam, a)
    parts = lam.padded(r)
    half = Fraction(a, 2)
    for i, j in itertools.combinations(range(r), 2):
        diff = parts[i] - parts[j]
        out *= rising_pochhammer(1 + half * (j - i - 1), diff)
        out /= rising_pochhammer(1 + half * (j - i), diff)
    return out


def conical_norm_sq_ratio(ctx: ConicalContext, num: Partition, den: Partition) -> Fraction:
    """Exact value of ||N_num||^2 / ||N_den||^2.

    Matched factors of the two norm products are combined row by row, so the
    cost scales with the row differences rather than the weights; weights of
    order 10^4 stay cheap.
    """
    ctx._check_length(num)
    ctx._check_length(den)
    r, a = ctx.r, ctx.a
    half = Fraction(a, 2)
    out = Fraction(1)
    for i in range(1, r + 1):
        base = ctx.rho - ctx.b - half * (i - 1)
        out *= pochhammer_quotient(base, num[i], den[i])
        base = ctx.rho - half * (i - 1)
        out *= pochhammer_quotient(base, den[i], num[i])
    pn, pd = num.padded(r), den.padded(r)
    for i, j in itertools.combinations(range(r), 2):
        dn, dd = pn[i] - pn[j], pd[i] - pd[j]
        out *= pochhammer_quotient(1 + half * (j - i - 1), dn, dd)
        out *= pochhammer_quotient(1 + half * (j - i), dd, dn)
    return out


def rep_dimension(ctx: ConicalContext, lam: Partition) -> int:
    """Dimension of the Peter-Weyl component attached to ``lam``:

        (rho)_lam / (rho-b)_lam
          * prod_{i<j} (l_i-l_j+(a/2)(j-i)) / ((a/2)(j-i))
                      * (l_i-l_j+1+(a/2)(j-i-1))_{a-1} / (1+(a/2)(j-i-1))_{a-1}

    The product is guaranteed to be a positive integer; a non-integer result
    signals formula misuse and raises.
    """
    ctx._check_length(lam)
    r, a = ctx.r, ctx.a
    half = Fraction(a, 2)
    out = Fraction(multivariate_pochhammer(ctx.rho, lam, a))
    out /= multivariate_pochhammer(ctx.rho - ctx.b, lam, a)
    parts = lam.padded(r)
    for i, j in itertools.combinations(range(r), 2):
        diff = parts[i] - parts[j]
        out *= (diff + half * (j - i)) / (half * (j - i))
        out *= rising_pochhammer(diff + 1 + half * (j - i - 1), a - 1)
        out /= rising_pochhammer(1 + half * (j - i - 1), a - 1)
    if out.denominator != 1 or out <= 0:
        raise InternalConsistencyError(
            f"dimension formula returned {out} for {ctx.desc.label()}, {lam}")
    return int(out)


def graded_dimension(ctx: ConicalContext, m: int) -> int:
    """Dimension of the degree-m slice spanned by length-one components.

    Uses the single-row specialization of the dimension product for m >= b
    and falls back to the full formula below that.
    """
    if m < 0:
        raise ParameterDomainError("graded_dimension needs m >= 0")
    if m < ctx.b:
        return rep_dimension(ctx, Partition((m,)) if m else Partition())
    r, a, b = ctx.r, ctx.a, ctx.b
    half = Fraction(a, 2)
    out = Fraction(rising_pochhammer(m + 1 + half * (r - 1), b))
    out /= rising_pochhammer(1 + half * (r - 1), b)
    for j in range(2, r + 1):
        out *= (m + half * (j - 1)) / (half * (j - 1))
        out *= rising_pochhammer(m + 1 + half * (j - 2), a - 1)
        out /= rising_pochhammer(1 + half * (j - 2), a - 1)
    if out.denominator != 1 or out <= 0:
        raise InternalConsistencyError(f"graded dimension returned {out}")
    return int(out)


def pochhammer_block_ratio(ctx: ConicalContext, lam: Partition, length: int, k: int) -> Rational:
    """(rho)_lam / (rho)_{lam - k_length} as the falling-factorial product

        prod_{j=1}^{length} (l_j + (a/2)(r-j) + b)_k^*
    """
    subtract_block(lam, length, k)  # validates the precondition
    half = Fraction(ctx.a, 2)
    out: Rational = 1
    for j in range(1, length + 1):
        out *= falling_pochhammer(lam[j] + half * (ctx.r - j) + ctx.b, k)
    return out


def conical_shift_coefficient(ctx: ConicalContext, lam: Partition, length: int, k: int) -> Fraction:
    """Coefficient of the adjoint block action along the conical line:

        prod_{j=1}^{length} (l_j+(a/2)(length-j))_k^* / (l_j+(a/2)(r-j)+b)_k^*

    Defined for partitions supported on the first ``length`` rows with
    k <= l_length.
    """
    if lam.length > length:
        raise ParameterDomainError(f"{lam} has more than {length} rows")
    if k > lam[length] and length >= 1:
        raise ParameterDomainError(f"k={k} exceeds row {length} of {lam}")
    half = Fraction(ctx.a, 2)
    out = Fraction(1)
    for j in range(1, length + 1):
        out *= Fraction(falling_pochhammer(lam[j] + half * (length - j), k))
        out /= falling_pochhammer(lam[j] + half * (ctx.r - j) + ctx.b, k)
    return out


def _principal_minor(r: int, s: int, ell: int) -> SymbolPolynomial:
    """Determinant of the leading ell x ell block of z in C^{r x s}."""
    nv = r * s
    out = SymbolPolynomial.zero(nv)
    for perm in itertools.permutations(range(1, ell + 1)):
        sign = 1
        for x, y in itertools.combinations(range(ell), 2):
            if perm[x] > perm[y]:
                sign = -sign
        hol = [0] * nv
        for i in range(1, ell + 1):
            hol[matrix_index(i, perm[i - 1], s)] += 1
        out += SymbolPolynomial.monomial(nv, hol, [0] * nv, sign)
    return out


def conical_polynomial_expand(ctx: ConicalContext, lam: Partition) -> SymbolPolynomial:
    """Monomial expansion of N_lam = N_1^{l1-l2} N_2^{l2-l3} ... for
    rectangular matrix domains, with the frame fixed to the leading
    principal minors."""
    if ctx.desc.family != "I":
        raise UnsupportedFamilyError(
            f"conical expansion only for type I, got {ctx.desc.label()}")
    ctx._check_length(lam)
    r, s = ctx.desc.params
    out = SymbolPolynomial.constant(r * s)
    for ell in range(1, r + 1):
        e = lam[ell] - lam[ell + 1] if ell < r else lam[r]
        minor = _principal_minor(r, s, ell)
        for _ in range(e):
            out = out * minor
    return out


def fock_norm_sq(p: SymbolPolynomial) -> Fraction:
    """Gaussian norm square of a holomorphic polynomial in orthonormal
    coordinates: sum_alpha |c_alpha|^2 alpha!."""
    if not p.is_holomorphic():
        raise SymbolDomainError("Fock norm is defined for holomorphic symbols here")
    total = Fraction(0)
    for (alpha, _), c in p.terms.items():
        if isinstance(c, complex):
            raise SymbolDomainError("exact Fock norm needs rational coefficients")
        fact = 1
        for e in alpha:
            for t in range(2, e + 1):
                fact *= t
        total += Fraction(c) * Fraction(c) * fact
    return total
