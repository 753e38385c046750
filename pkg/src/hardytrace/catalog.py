"""Catalog of irreducible hermitian Jordan triples and their invariants.

Each domain family is reduced to the numerical invariants (r, a, b) from
which dimension d, the density rho = d/r and the boundary invariant
n = 1 + a(r-1) + b follow by exact rational arithmetic.  The Peirce-1 space
of a minimal tripotent is tabulated per family, including the Jordan
invariant a_V needed by the Gindikin gamma function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterDomainError


@dataclass(frozen=True)
class DomainDescriptor:
    """Numerical invariants of an irreducible bounded symmetric domain."""

    family: str               # "I", "II", "III", "IV", "V", "VI", "ball"
    params: tuple[int, ...]   # family parameters, e.g. (r, s) for type I
    r: int                    # rank
    a: int                    # off-diagonal Peirce multiplicity
    b: int                    # boundary multiplicity
    d: int                    # complex dimension

    def __post_init__(self):
        expected = self.r * (1 + Fraction(self.a, 2) * (self.r - 1) + self.b)
        if expected != self.d:
            raise ParameterDomainError(
                f"inconsistent invariants: d={self.d}, expected {expected}")

    @property
    def rho(self) -> Fraction:
        """d/r = 1 + (a/2)(r-1) + b."""
        return Fraction(self.d, self.r)

    @property
    def n(self) -> int:
        """1 + a(r-1) + b: complex dimension of the rank-one variety."""
        return 1 + self.a * (self.r - 1) + self.b

    def label(self) -> str:
        ps = ",".join(str(p) for p in self.params)
        return f"{self.family}({ps})" if ps else self.family


@dataclass(frozen=True)
class Peirce1Data:
    """Invariants of the Peirce-1 space V of a minimal tripotent.

    For a = 2 and rank > 1 the space V splits into two rank-one factors of
    dimensions ``factors``; the irreducible fields are then None.
    """

    r_V: int | None
    p_V: int | None
    d_V: int
    a_V: int | None
    reducible: bool = False
    factors: tuple[int, int] | None = None


def _make(family: str, params: tuple[int, ...], r: int, a: int, b: int) -> DomainDescriptor:
    d = r * (1 + Fraction(a, 2) * (r - 1) + b)
    if d.denominator != 1:
        raise ParameterDomainError(f"non-integral dimension for {family}{params}")
    return DomainDescriptor(family, params, r, a, b, int(d))


def ball(d: int) -> DomainDescriptor:
    """Unit ball of C^d: rank 1 with the conventions a=2, b=d-1."""
    if d < 1:
        raise ParameterDomainError("ball needs d >= 1")
    return _make("ball", (d,), 1, 2, d - 1)


def type_i(r: int, s: int) -> DomainDescriptor:
    """Rectangular matrices C^{r x s}, r <= s."""
    if not (1 <= r <= s):
        raise ParameterDomainError("type I needs 1 <= r <= s")
    return _make("I", (r, s), r, 2, s - r)


def type_ii(r: int, eps: int) -> DomainDescriptor:
    """Antisymmetric (2r+eps) x (2r+eps) matrices, eps in {0, 1}."""
    if r < 2 or eps not in (0, 1):
        raise ParameterDomainError("type II needs r >= 2 and eps in {0,1}")
    return _make("II", (r, eps), r, 4, 2 * eps)


def type_iii(r: int) -> DomainDescriptor:
    """Symmetric r x r matrices."""
    if r < 1:
        raise ParameterDomainError("type III needs r >= 1")
    return _make("III", (r,), r, 1, 0)


def type_iv(d: int) -> DomainDescriptor:
    """Spin factor of dimension d (Lie ball); d=4 is reducible and rejected."""
    if d < 3:
        raise ParameterDomainError("type IV needs d >= 3")
    if d == 4:
        raise ParameterDomainError("type IV with d=4 is reducible")
    return _make("IV", (d,), 2, d - 2, 0)


def type_v() -> DomainDescriptor:
    """Exceptional 16-dimensional domain (octonion 1x2 matrices)."""
    return _make("V", (), 2, 6, 4)


def type_vi() -> DomainDescriptor:
    """Exceptional 27-dimensional domain (complexified Albert algebra)."""
    return _make("VI", (), 3, 8, 0)


_FACTORIES = {
    "ball": ball, "I": type_i, "II": type_ii, "III": type_iii,
    "IV": type_iv, "V": type_v, "VI": type_vi,
}


def descriptor_for(family: str, *params: int) -> DomainDescriptor:
    """Build the descriptor for a family tag such as ``("I", 2, 3)``."""
    try:
        factory = _FACTORIES[family]
    except KeyError:
        raise ParameterDomainError(f"unknown family {family!r}") from None
    return factory(*params)


def _rank_one_peirce(dim: int) -> Peirce1Data:
    # V is the ball of C^dim; dim = 0 degenerates to the zero triple.
    if dim == 0:
        return Peirce1Data(r_V=0, p_V=None, d_V=0, a_V=None)
    return Peirce1Data(r_V=1, p_V=dim + 1, d_V=dim, a_V=2)


def peirce1_data(desc: DomainDescriptor) -> Peirce1Data:
    """Invariants of V = Z^1_{e_1} for a frame tripotent e_1.

    For a != 2 the pair (r_V, p_V) satisfies r_V p_V = r a + b exactly.
    """
    n1 = desc.n - 1
    if desc.a == 2 and desc.r > 1:
        # C^{r x (r+b)}: V splits as C^{(r-1) x 1} + C^{1 x (r+b-1)}
        return Peirce1Data(r_V=None, p_V=None, d_V=n1, a_V=None,
                           reducible=True,
                           factors=(desc.r - 1, desc.r + desc.b - 1))
    if desc.r == 1:
        return _rank_one_peirce(n1)
    if desc.family == "II":
        # V = C^{2 x (2(r-1)+eps)}
        r, eps = desc.params
        cols = 2 * (r - 1) + eps
        if cols == 1:
            return _rank_one_peirce(2)
        return Peirce1Data(r_V=2, p_V=2 * r + eps, d_V=n1, a_V=2)
    if desc.family == "III":
        return _rank_one_peirce(desc.r - 1)  # V = C^{r-1}, genus r
    if desc.family == "IV":
        d = desc.params[0]
        if d == 3:
            return _rank_one_peirce(1)  # 1-dimensional spin factor = disk
        return Peirce1Data(r_V=2, p_V=d - 2, d_V=n1, a_V=d - 4)
    if desc.family == "V":
        # V = antisymmetric 5x5, i.e. type II with (r, eps) = (2, 1)
        return Peirce1Data(r_V=2, p_V=8, d_V=n1, a_V=4)
    if desc.family == "VI":
        # V = octonion 1x2, i.e. the type V domain
        return Peirce1Data(r_V=2, p_V=12, d_V=n1, a_V=6)
    raise ParameterDomainError(f"no Peirce data for {desc.label()}")


def standard_catalog() -> list[DomainDescriptor]:
    """Representative instances of every family, used by the CLI table and
    the catalog-wide identity tests."""
    entries = [ball(d) for d in (1, 2, 3, 4)]
    entries += [type_i(1, 3), type_i(2, 2), type_i(2, 3), type_i(3, 3), type_i(3, 4)]
    entries += [type_ii(2, 0), type_ii(2, 1), type_ii(3, 0), type_ii(3, 1)]
    entries += [type_iii(r) for r in (2, 3)]
    entries += [type_iv(d) for d in (3, 5, 6, 8)]
    entries += [type_v(), type_vi()]
    return entries


def catalog_table() -> list[dict]:
    """The full catalog with Peirce-1 data as plain JSON-able rows."""
    rows = []
    for desc in standard_catalog():
        pd = peirce1_data(desc)
        rows.append({
            "family": desc.label(),
            "r": desc.r, "a": desc.a, "b": desc.b, "d": desc.d,
            "rho": [desc.rho.numerator, desc.rho.denominator],
            "n": desc.n,
            "peirce1": {
                "r_V": pd.r_V, "p_V": pd.p_V, "d_V": pd.d_V, "a_V": pd.a_V,
                "reducible": pd.reducible, "factors": pd.factors,
            },
        })
    return rows
