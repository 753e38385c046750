"""Integer partitions and Pochhammer calculus over exact rationals.

Everything in this module is exact: values are ``fractions.Fraction`` (or
int) and no floating point is used, so downstream identity tests can demand
literal equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import ParameterDomainError

Rational = int | Fraction


class Partition:
    """A weakly decreasing tuple of nonnegative integers.

    Trailing zeros are stripped on construction, so ``Partition((2, 1, 0))``
    and ``Partition((2, 1))`` are the same partition.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int] = ()):
        ps = tuple(int(p) for p in parts)
        if any(p < 0 for p in ps):
            raise ParameterDomainError(f"negative part in {ps}")
        if any(ps[i] < ps[i + 1] for i in range(len(ps) - 1)):
            raise ParameterDomainError(f"parts not weakly decreasing: {ps}")
        while ps and ps[-1] == 0:
            ps = ps[:-1]
        self.parts = ps

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        """Part at 1-based row ``i``; zero beyond the length."""
        if i < 1:
            raise IndexError("rows are 1-based")
        return self.parts[i - 1] if i <= len(self.parts) else 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"Partition{self.parts}"

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def padded(self, r: int) -> tuple[int, ...]:
        """Parts padded with zeros to length ``r``."""
        if len(self.parts) > r:
            raise ParameterDomainError(f"partition {self} longer than {r}")
        return self.parts + (0,) * (r - len(self.parts))

    def derived(self) -> "Partition":
        """Drop the first row: (l1, l2, ...) -> (l2, ...)."""
        return Partition(self.parts[1:])

    def prepend(self, m: int) -> "Partition":
        """New partition (m, l1, l2, ...); m must dominate the first row."""
        return Partition((m,) + self.parts)


def block(k: int, length: int) -> Partition:
    """The rectangular partition (k, ..., k) with ``length`` rows."""
    if k < 0 or length < 0:
        raise ParameterDomainError("block needs k >= 0 and length >= 0")
    return Partition((k,) * length)


def subtract_block(lam: Partition, length: int, k: int) -> Partition:
    """Componentwise difference lam - (k,...,k,0,...) with k in the first
    ``length`` rows.  Raises if the result is not a partition."""
    if length < 0 or k < 0:
        raise ParameterDomainError("need length >= 0 and k >= 0")
    if lam[length] < k and length > 0:
        raise ParameterDomainError(f"{lam} row {length} smaller than {k}")
    parts = [lam[i] - (k if i <= length else 0)
             for i in range(1, max(lam.length, length) + 1)]
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise ParameterDomainError(f"{lam} - {k}_{length} is not a partition")
    return Partition(parts)


def rising_pochhammer(nu: Rational, m: int) -> Rational:
    """Rising factorial (nu)_m = nu (nu+1) ... (nu+m-1); empty product is 1."""
    if m < 0:
        raise ParameterDomainError("rising_pochhammer needs m >= 0")
    out: Rational = 1
    for i in range(m):
        out *= nu + i
    return out


def falling_pochhammer(m: Rational, j: int) -> Rational:
    """Falling factorial (m)_j^* = m (m-1) ... (m-j+1); empty product is 1."""
    if j < 0:
        raise ParameterDomainError("falling_pochhammer needs j >= 0")
    out: Rational = 1
    for i in range(j):
        out *= m - i
    return out


def pochhammer_quotient(nu: Rational, p: int, q: int) -> Rational:
    """(nu)_p / (nu)_q evaluated with O(|p-q|) factor operations.

    Safe whenever no factor in the shorter tail vanishes; used to form
    norm-square ratios at large weight without building huge numerators.
    """
    if p < 0 or q < 0:
        raise ParameterDomainError("pochhammer_quotient needs p, q >= 0")
    if p >= q:
        out: Rational = 1
        for t in range(q, p):
            out *= nu + t
        return out
    denom: Rational = 1
    for t in range(p, q):
        denom *= nu + t
    if denom == 0:
        raise ZeroDivisionError(f"({nu})_{q} vanishes beyond ({nu})_{p}")
    return Fraction(1, 1) / denom


def multivariate_pochhammer(s: Rational, lam: Partition, a: int, r: int | None = None) -> Rational:
    """Multi-row Pochhammer prod_i (s - (a/2)(i-1))_{lam_i}.

    ``r`` only bounds the number of rows; trailing zero rows contribute 1.
    """
    rr = lam.length if r is None else r
    if lam.length > rr:
        raise ParameterDomainError(f"partition {lam} longer than r={rr}")
    out: Rational = 1
    for i in range(1, lam.length + 1):
        out *= rising_pochhammer(s - Fraction(a, 2) * (i - 1), lam[i])
    return out


def enumerate_partitions(r: int, m: int) -> list[Partition]:
    """All partitions of weight ``m`` with at most ``r`` parts, in
    lexicographically descending order."""
    if r < 1 or m < 0:
        raise ParameterDomainError("need r >= 1 and m >= 0")
    out: list[Partition] = []

    def rec(prefix: list[int], remaining: int, rows_left: int, cap: int) -> None:
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if rows_left == 0:
            return
        # smallest admissible first part so the rest fits
        lo = -(-remaining // rows_left)  # ceil
        for p in range(min(cap, remaining), lo - 1, -1):
            rec(prefix + [p], remaining - p, rows_left - 1, p)

    rec([], m, r, m)
    return out
