"""Polynomial symbols in z and conj(z) with exact coefficients.

A symbol is a finite sum of mixed monomials  c * z^alpha * conj(z)^beta
over a fixed number of complex coordinates.  Coefficients stay exact
(``Fraction``) whenever the inputs are rational; complex coefficients are
allowed and silently switch the affected terms to floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .errors import SymbolDomainError

Coeff = Fraction | complex
MultiIndex = tuple[int, ...]
TermKey = tuple[MultiIndex, MultiIndex]


def _as_coeff(c) -> Coeff:
    if isinstance(c, (Fraction, complex)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, float):
        return complex(c)
    raise TypeError(f"unsupported coefficient type {type(c)!r}")


def _conj_coeff(c: Coeff) -> Coeff:
    return c.conjugate() if isinstance(c, complex) else c


class SymbolPolynomial:
    """Finite sum of monomials c * z^alpha * conj(z)^beta."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[TermKey, Coeff] | None = None):
        self.nvars = nvars
        self.terms: dict[TermKey, Coeff] = {}
        if terms:
            for (al, be), c in terms.items():
                self._add_term(tuple(al), tuple(be), _as_coeff(c))

    def _add_term(self, al: MultiIndex, be: MultiIndex, c: Coeff) -> None:
        if len(al) != self.nvars or len(be) != self.nvars:
            raise SymbolDomainError("multi-index length != number of variables")
        cur = self.terms.get((al, be), Fraction(0))
        new = cur + c
        if new == 0:
            self.terms.pop((al, be), None)
        else:
            self.terms[(al, be)] = new

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "SymbolPolynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c=1) -> "SymbolPolynomial":
        z = (0,) * nvars
        return cls(nvars, {(z, z): c})

    @classmethod
    def coordinate(cls, nvars: int, k: int) -> "SymbolPolynomial":
        al = tuple(1 if i == k else 0 for i in range(nvars))
        return cls(nvars, {(al, (0,) * nvars): 1})

    @classmethod
    def coordinate_conj(cls, nvars: int, k: int) -> "SymbolPolynomial":
        be = tuple(1 if i == k else 0 for i in range(nvars))
        return cls(nvars, {((0,) * nvars, be): 1})

    @classmethod
    def monomial(cls, nvars: int, hol: Iterable[int], anti: Iterable[int], coeff=1) -> "SymbolPolynomial":
        return cls(nvars, {(tuple(hol), tuple(anti)): coeff})

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        return max((sum(a) + sum(b) for (a, b) in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_holomorphic(self) -> bool:
        return all(sum(b) == 0 for (_, b) in self.terms)

    def is_antiholomorphic(self) -> bool:
        return all(sum(a) == 0 for (a, _) in self.terms)

    def holomorphic_part_pairs(self) -> list[tuple[MultiIndex, Coeff]]:
        """(alpha, coeff) pairs; only valid for holomorphic symbols."""
        if not self.is_holomorphic():
            raise SymbolDomainError("symbol has antiholomorphic factors")
        return [(a, c) for (a, _), c in sorted(self.terms.items())]

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "SymbolPolynomial") -> "SymbolPolynomial":
        out = SymbolPolynomial(self.nvars, self.terms)
        for (a, b), c in other.terms.items():
            out._add_term(a, b, c)
        return out

    def __sub__(self, other: "SymbolPolynomial") -> "SymbolPolynomial":
        return self + (-1) * other

    def __mul__(self, other):
        if isinstance(other, SymbolPolynomial):
            out = SymbolPolynomial(self.nvars)
            for (a1, b1), c1 in self.terms.items():
                for (a2, b2), c2 in other.terms.items():
                    a = tuple(x + y for x, y in zip(a1, a2))
                    b = tuple(x + y for x, y in zip(b1, b2))
                    out._add_term(a, b, c1 * c2)
            return out
        c = _as_coeff(other)
        return SymbolPolynomial(self.nvars,
                                {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def conj(self) -> "SymbolPolynomial":
        return SymbolPolynomial(self.nvars,
                                {(b, a): _conj_coeff(c)
                                 for (a, b), c in self.terms.items()})

    def wirtinger(self, k: int) -> "SymbolPolynomial":
        """Holomorphic derivative d/dz_k (exact coefficient manipulation)."""
        out = SymbolPolynomial(self.nvars)
        for (a, b), c in self.terms.items():
            if a[k] > 0:
                a2 = a[:k] + (a[k] - 1,) + a[k + 1:]
                out._add_term(a2, b, c * a[k])
        return out

    def wirtinger_bar(self, k: int) -> "SymbolPolynomial":
        """Antiholomorphic derivative d/dconj(z_k)."""
        out = SymbolPolynomial(self.nvars)
        for (a, b), c in self.terms.items():
            if b[k] > 0:
                b2 = b[:k] + (b[k] - 1,) + b[k + 1:]
                out._add_term(a, b2, c * b[k])
        return out

    def evaluate(self, z) -> complex:
        """Numeric evaluation at a point (sequence of complex numbers)."""
        total = 0j
        for (a, b), c in self.terms.items():
            v = complex(c)
            for k in range(self.nvars):
                if a[k]:
                    v *= z[k] ** a[k]
                if b[k]:
                    v *= z[k].conjugate() ** b[k]
            total += v
        return total

    def evaluate_many(self, z):
        """Vectorized evaluation on an (N, nvars) complex array."""
        import numpy as np
        z = np.asarray(z)
        total = np.zeros(z.shape[0], dtype=complex)
        zc = z.conjugate()
        for (a, b), c in self.terms.items():
            v = np.full(z.shape[0], complex(c))
            for k in range(self.nvars):
                if a[k]:
                    v *= z[:, k] ** a[k]
                if b[k]:
                    v *= zc[:, k] ** b[k]
            total += v
        return total

    def __eq__(self, other) -> bool:
        return (isinstance(other, SymbolPolynomial)
                and self.nvars == other.nvars and self.terms == other.terms)

    def __repr__(self) -> str:
        bits = []
        for (a, b), c in sorted(self.terms.items()):
            bits.append(f"{c}*z^{a}*zbar^{b}")
        return " + ".join(bits) if bits else "0"


def holomorphic_derivative(p: SymbolPolynomial, k: int) -> SymbolPolynomial:
    """Directional derivative along coordinate k of a holomorphic symbol."""
    if not p.is_holomorphic():
        raise SymbolDomainError("holomorphic_derivative needs a holomorphic symbol")
    return p.wirtinger(k)


# -- matrix coordinates and the rank-one restriction -------------------------

def matrix_index(i: int, j: int, s: int) -> int:
    """Row-major flat index of the matrix entry z_{ij} (1-based i, j)."""
    return (i - 1) * s + (j - 1)


def matrix_coordinate(r: int, s: int, i: int, j: int) -> SymbolPolynomial:
    return SymbolPolynomial.coordinate(r * s, matrix_index(i, j, s))


def restrict_rank_one(f: SymbolPolynomial, r: int, s: int) -> SymbolPolynomial:
    """Push a symbol on C^{r x s} to sphere-pair coordinates via
    z_{ij} -> xi_i * eta_j, giving a symbol in (xi, eta) with r + s variables
    (xi first).  Always produces a balanced symbol."""
    if f.nvars != r * s:
        raise SymbolDomainError(f"expected {r * s} matrix coordinates")
    out = SymbolPolynomial(r + s)
    for (a, b), c in f.terms.items():
        al = [0] * (r + s)
        be = [0] * (r + s)
        for i in range(r):
            for j in range(s):
                e = a[i * s + j]
                al[i] += e
                al[r + j] += e
                e = b[i * s + j]
                be[i] += e
                be[r + j] += e
        out._add_term(tuple(al), tuple(be), c)
    return out


def is_sphere_balanced(f: SymbolPolynomial, r: int) -> bool:
    """True iff each term has equal holomorphic-minus-antiholomorphic degree
    in the first r coordinates and in the rest, so that the symbol descends
    to a function on the rank-one manifold."""
    for (a, b) in f.terms:
        if (sum(a[:r]) - sum(b[:r])) != (sum(a[r:]) - sum(b[r:])):
            return False
    return True
