"""Boundary geometry of the rank-one manifold.

Covers the Peirce frames at minimal tripotents, the contact form and the
boundary Poisson bracket, Poisson extension of polynomial symbols, the
multivariate gamma constant of the trace formula, and Monte-Carlo /
exact-moment evaluation of the geometric side of the trace identity.

Conventions: the hermitian inner product conjugates its first argument,
(x|y) = sum conj(x_i) y_i, and d eta(w1, w2) = ((w1|w2) - (w2|w1))/i.
The bracket of two symbols carries one factor of i per pair; the trace
formula divides the n-fold bracket product by i^n, which makes the
integrand real for conjugate symbol pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .catalog import DomainDescriptor, Peirce1Data, peirce1_data
from .errors import (InternalConsistencyError, ParameterDomainError,
                     SymbolDomainError, UnsupportedFamilyError)
from .models import sphere_monomial_norm_sq
from .symbols import SymbolPolynomial, restrict_rank_one

# ---------------------------------------------------------------------------
# boundary points and Peirce frames
# ---------------------------------------------------------------------------


@dataclass
class BoundaryPoint:
    """A minimal tripotent: unit vector c (ball) or c = xi1 xi2^T (matrix)."""

    kind: str                      # "ball" or "rank-one"
    c: np.ndarray                  # ambient coordinates (flattened matrix)
    xi: tuple[np.ndarray, np.ndarray] | None = None
    shape: tuple[int, int] | None = None   # (r, s) for matrix domains


@dataclass
class PeirceFrame:
    """Orthonormal complex basis of the Peirce-1 space, with the Reeb
    direction i c and the Peirce-2 direction c."""

    vectors: np.ndarray            # (n-1, d) complex, rows orthonormal
    reeb: np.ndarray
    tripotent: np.ndarray


def inner(x: np.ndarray, y: np.ndarray) -> complex:
    """(x|y) with conjugation in the first slot."""
    return complex(np.vdot(x, y))


def _orthonormal_complement(v: np.ndarray) -> np.ndarray:
    """Rows form an orthonormal basis of the hermitian complement of v."""
    d = len(v)
    a = np.column_stack([v.astype(complex), np.eye(d, dtype=complex)])
    q, _ = np.linalg.qr(a)
    return q[:, 1:d].T


def ball_point(c) -> BoundaryPoint:
    c = np.asarray(c, dtype=complex)
    c = c / np.linalg.norm(c)
    return BoundaryPoint("ball", c)


def rank_one_point(xi1, xi2) -> BoundaryPoint:
    xi1 = np.asarray(xi1, dtype=complex)
    xi2 = np.asarray(xi2, dtype=complex)
    xi1 = xi1 / np.linalg.norm(xi1)
    xi2 = xi2 / np.linalg.norm(xi2)
    c = np.outer(xi1, xi2).reshape(-1)
    return BoundaryPoint("rank-one", c, xi=(xi1, xi2), shape=(len(xi1), len(xi2)))


def peirce_frame(point: BoundaryPoint) -> PeirceFrame:
    """Orthonormal basis of Z^1_c.

    Ball: the hermitian complement of c.  Matrix domains: the rank-one
    perturbations xi1 eta^T (eta orthogonal to xi2) and u xi2^T (u
    orthogonal to xi1).
    """
    if point.kind == "ball":
        vecs = _orthonormal_complement(point.c)
    elif point.kind == "rank-one":
        xi1, xi2 = point.xi
        etas = _orthonormal_complement(xi2)
        us = _orthonormal_complement(xi1)
        rows = [np.outer(xi1, eta).reshape(-1) for eta in etas]
        rows += [np.outer(u, xi2).reshape(-1) for u in us]
        vecs = np.array(rows) if rows else np.zeros((0, len(point.c)), dtype=complex)
    else:
        raise UnsupportedFamilyError(f"no Peirce frame for kind {point.kind!r}")
    return PeirceFrame(vectors=vecs, reeb=1j * point.c, tripotent=point.c)


# ---------------------------------------------------------------------------
# contact form and boundary Poisson bracket
# ---------------------------------------------------------------------------


def _directional_derivative(f: SymbolPolynomial, c: np.ndarray, w: np.ndarray) -> complex:
    """Ambient real directional derivative of f at c along w, from exact
    Wirtinger derivatives."""
    total = 0j
    for k in range(f.nvars):
        df = f.wirtinger(k)
        if not df.is_zero():
            total += w[k] * df.evaluate(c)
        dfb = f.wirtinger_bar(k)
        if not dfb.is_zero():
            total += w[k].conjugate() * dfb.evaluate(c)
    return total


def boundary_bracket(phi: SymbolPolynomial, psi: SymbolPolynomial,
                     point: BoundaryPoint) -> complex:
    """Boundary Poisson bracket {phi, psi} at a minimal tripotent.

    Builds the real frame {v, iv} of the Peirce-1 space, assembles the
    two-form matrix Omega_kl = d eta(w_k, w_l), solves Omega zeta = g(phi)
    for the hamiltonian coefficients and returns zeta(phi)^T g(psi).
    """
    frame = peirce_frame(point)
    vs = frame.vectors
    if vs.shape[0] == 0:
        return 0j
    real_basis = []
    for v in vs:
        real_basis.append(v)
        real_basis.append(1j * v)
    k = len(real_basis)
    omega = np.zeros((k, k))
    for a in range(k):
        for b in range(k):
            val = (inner(real_basis[a], real_basis[b])
                   - inner(real_basis[b], real_basis[a])) / 1j
            omega[a, b] = val.real
    g_phi = np.array([_directional_derivative(phi, point.c, w) for w in real_basis])
    g_psi = np.array([_directional_derivative(psi, point.c, w) for w in real_basis])
    try:
        zeta_phi = np.linalg.solve(omega, g_phi)
    except np.linalg.LinAlgError as exc:
        raise InternalConsistencyError("degenerate two-form: frame is broken") from exc
    return complex(zeta_phi @ g_psi)


# ---------------------------------------------------------------------------
# Poisson extension
# ---------------------------------------------------------------------------


def _peirce0_basis(point: BoundaryPoint) -> np.ndarray:
    """Orthonormal basis of the Peirce-0 space; only rank <= 1 supported."""
    if point.kind == "ball":
        return np.zeros((0, len(point.c)), dtype=complex)
    r, s = point.shape
    if r > 2:
        raise UnsupportedFamilyError("Peirce-0 space has rank > 1 for r > 2")
    if r == 1:
        return np.zeros((0, len(point.c)), dtype=complex)
    xi1, xi2 = point.xi
    us = _orthonormal_complement(xi1)      # single vector for r = 2
    etas = _orthonormal_complement(xi2)
    return np.array([np.outer(us[0], eta).reshape(-1) for eta in etas])


def _shifted_monomial_coeffs(expo: tuple[int, ...], c: np.ndarray,
                             w_basis: np.ndarray) -> dict[tuple[int, ...], complex]:
    """Coefficients in t of prod_k (c_k + (sum_j t_j w_jk))^expo_k."""
    nt = w_basis.shape[0]
    zero_t = (0,) * nt
    poly: dict[tuple[int, ...], complex] = {zero_t: 1.0 + 0j}
    for k, e in enumerate(expo):
        for _ in range(e):
            new: dict[tuple[int, ...], complex] = {}
            for mu, coef in poly.items():
                new[mu] = new.get(mu, 0j) + coef * c[k]
                for j in range(nt):
                    mu2 = mu[:j] + (mu[j] + 1,) + mu[j + 1:]
                    new[mu2] = new.get(mu2, 0j) + coef * w_basis[j][k]
            poly = new
    return poly


def poisson_extension(f: SymbolPolynomial, point: BoundaryPoint) -> complex:
    """Value at a minimal tripotent of the harmonic extension of f.

    For the ball the extension restricts to f itself.  For matrix domains
    with rank-one Peirce-0 space (r <= 2), each term conj(z^delta) z^gamma
    contributes the sphere moment pairing of the shifted monomials over
    the Peirce-0 Shilov boundary.
    """
    if point.kind == "ball":
        return f.evaluate(point.c)
    w_basis = _peirce0_basis(point)
    if w_basis.shape[0] == 0:
        return f.evaluate(point.c)
    dim0 = w_basis.shape[0]
    total = 0j
    for (gam, dl), coeff in f.terms.items():
        q_coeffs = _shifted_monomial_coeffs(gam, point.c, w_basis)
        p_coeffs = _shifted_monomial_coeffs(dl, point.c, w_basis)
        val = 0j
        for mu, qc in q_coeffs.items():
            pc = p_coeffs.get(mu)
            if pc is not None:
                val += pc.conjugate() * qc * float(sphere_monomial_norm_sq(mu, dim0))
        total += complex(coeff) * val
    return total


def poisson_hat_symbol(f: SymbolPolynomial, desc: DomainDescriptor) -> SymbolPolynomial:
    """Ambient polynomial representative of the Poisson extension restricted
    to the rank-one manifold.

    Supported: the ball (extension is f itself), purely holomorphic or
    antiholomorphic symbols (any domain), and arbitrary mixed symbols on the
    2 x 2 matrix domain, where the Peirce-0 boundary is a circle in the
    direction conj(adj z) and the circle moments pair off exactly.
    """
    if desc.family == "ball" or desc.r == 1:
        return f
    if f.is_holomorphic() or f.is_antiholomorphic():
        return f
    if desc.family == "I" and desc.params == (2, 2):
        return _poisson_hat_22(f)
    raise UnsupportedFamilyError(
        f"mixed Poisson extension not implemented for {desc.label()}")


def _poisson_hat_22(f: SymbolPolynomial) -> SymbolPolynomial:
    """Mixed-symbol Poisson extension on C^{2x2}, as an ambient symbol.

    On the rank-one manifold the Peirce-0 line at c is spanned by the unit
    vector omega(c) = conj([[z22, -z21], [-z12, z11]]); substituting
    z -> z + t omega and pairing equal powers of the circle variable t
    implements the mean over the Peirce-0 circle.
    """
    if f.nvars != 4:
        raise SymbolDomainError("expected a symbol on the four matrix entries")
    # coordinates: 0: z11, 1: z12, 2: z21, 3: z22
    nv = 5  # four matrix entries plus the circle variable t (last)
    omega_anti = {0: (3, 1), 1: (2, -1), 2: (1, -1), 3: (0, 1)}  # k -> (conj coord, sign)

    def shifted(k: int) -> SymbolPolynomial:
        zk = SymbolPolynomial.coordinate(nv, k)
        src, sign = omega_anti[k]
        tsym = SymbolPolynomial.coordinate(nv, 4)
        return zk + sign * (tsym * SymbolPolynomial.coordinate_conj(nv, src))

    shifted_coords = [shifted(k) for k in range(4)]
    expanded = SymbolPolynomial.zero(nv)
    for (gam, dl), coeff in f.terms.items():
        term = SymbolPolynomial.constant(nv, coeff)
        for k in range(4):
            for _ in range(gam[k]):
                term = term * shifted_coords[k]
            for _ in range(dl[k]):
                term = term * shifted_coords[k].conj()
        expanded += term
    out = SymbolPolynomial.zero(4)
    for (a, b), coeff in expanded.terms.items():
        if a[4] == b[4]:  # circle moment: equal powers of t and conj(t)
            out += SymbolPolynomial.monomial(4, a[:4], b[:4], coeff)
    return out


# ---------------------------------------------------------------------------
# symbolic brackets and exact moments
# ---------------------------------------------------------------------------


def _peirce1_projection_symbols(desc: DomainDescriptor) -> tuple[list[list[SymbolPolynomial]], int]:
    """Entries P_kl of the Peirce-1 projection as polynomial symbols over
    the model coordinates, together with the model variable count."""
    if desc.family == "ball" or desc.r == 1:
        d = desc.d
        rows = []
        for k in range(d):
            row = []
            for ell in range(d):
                p = SymbolPolynomial.zero(d)
                if k == ell:
                    p += SymbolPolynomial.constant(d)
                hol = [0] * d
                anti = [0] * d
                hol[k] = 1
                anti[ell] = 1
                p -= SymbolPolynomial.monomial(d, hol, anti)
                row.append(p)
            rows.append(row)
        return rows, d
    if desc.family != "I":
        raise UnsupportedFamilyError(f"bracket symbols need a matrix domain, got {desc.label()}")
    r, s = desc.params
    nv = r + s

    def xi1(i):
        return SymbolPolynomial.coordinate(nv, i - 1)

    def xi1c(i):
        return SymbolPolynomial.coordinate_conj(nv, i - 1)

    def xi2(j):
        return SymbolPolynomial.coordinate(nv, r + j - 1)

    def xi2c(j):
        return SymbolPolynomial.coordinate_conj(nv, r + j - 1)

    rows = []
    for i in range(1, r + 1):
        for j in range(1, s + 1):
            row = []
            for i2 in range(1, r + 1):
                for j2 in range(1, s + 1):
                    p1 = xi1(i) * xi1c(i2)                       # (P1)_{i i2}
                    p2 = xi2c(j2) * xi2(j)                       # (P2)_{j2 j}
                    q2 = -1 * p2
                    if j == j2:
                        q2 += SymbolPolynomial.constant(nv)
                    q1 = -1 * p1
                    if i == i2:
                        q1 += SymbolPolynomial.constant(nv)
                    row.append(p1 * q2 + q1 * p2)
            rows.append(row)
    return rows, nv


def _restrict_to_model(f: SymbolPolynomial, desc: DomainDescriptor) -> SymbolPolynomial:
    if desc.family == "ball" or desc.r == 1:
        return f
    r, s = desc.params
    return restrict_rank_one(f, r, s)


def bracket_symbol(phi: SymbolPolynomial, psi: SymbolPolynomial,
                   desc: DomainDescriptor) -> SymbolPolynomial:
    """The bracket divided by i, as a polynomial on the model coordinates:

        {phi, psi} = i * sum_kl P_kl (dbar_l phi d_k psi - d_k phi dbar_l psi)

    with P the Peirce-1 projection.  Ambient Wirtinger derivatives are taken
    first and restricted to the rank-one coordinates afterwards.
    """
    P, nv = _peirce1_projection_symbols(desc)
    d = desc.d
    if phi.nvars != d or psi.nvars != d:
        raise SymbolDomainError(f"symbols must use the {d} ambient coordinates")
    out = SymbolPolynomial.zero(nv)
    dpsi = [_restrict_to_model(psi.wirtinger(k), desc) for k in range(d)]
    dphi = [_restrict_to_model(phi.wirtinger(k), desc) for k in range(d)]
    dbphi = [_restrict_to_model(phi.wirtinger_bar(k), desc) for k in range(d)]
    dbpsi = [_restrict_to_model(psi.wirtinger_bar(k), desc) for k in range(d)]
    for k in range(d):
        for ell in range(d):
            term = SymbolPolynomial.zero(nv)
            if not (dbphi[ell].is_zero() or dpsi[k].is_zero()):
                term += dbphi[ell] * dpsi[k]
            if not (dphi[k].is_zero() or dbpsi[ell].is_zero()):
                term -= dphi[k] * dbpsi[ell]
            if not term.is_zero():
                out += P[k][ell] * term
    return out


def moment_expectation(sym: SymbolPolynomial, desc: DomainDescriptor):
    """Exact expectation of a model-coordinate symbol under the invariant
    probability measure (uniform sphere, or independent sphere pair)."""
    if desc.family == "ball" or desc.r == 1:
        total = Fraction(0)
        fl = 0.0
        exact = True
        for (a, b), c in sym.terms.items():
            if a != b:
                continue
            mom = sphere_monomial_norm_sq(a, desc.d)
            if isinstance(c, complex):
                exact = False
                fl += (c * float(mom)).real
            else:
                total += Fraction(c) * mom
        return total if exact and fl == 0.0 else float(total) + fl
    if desc.family != "I":
        raise UnsupportedFamilyError(f"moments not implemented for {desc.label()}")
    r, s = desc.params
    total = Fraction(0)
    fl = 0.0
    exact = True
    for (a, b), c in sym.terms.items():
        if a[:r] != b[:r] or a[r:] != b[r:]:
            continue
        mom = sphere_monomial_norm_sq(a[:r], r) * sphere_monomial_norm_sq(a[r:], s)
        if isinstance(c, complex):
            exact = False
            fl += (c * float(mom)).real
        else:
            total += Fraction(c) * mom
    return total if exact and fl == 0.0 else float(total) + fl


# ---------------------------------------------------------------------------
# Gindikin gamma and the geometric constant
# ---------------------------------------------------------------------------


def gindikin_gamma(data: Peirce1Data, s: float) -> float:
    """Multivariate gamma of the radial cone:
    (2 pi)^((d_V - r_V)/2) prod_{j<r_V} Gamma(s - (a_V/2) j)."""
    if data.reducible:
        raise UnsupportedFamilyError("Gindikin gamma needs an irreducible space")
    if data.r_V == 0:
        return 1.0
    out = (2 * math.pi) ** ((data.d_V - data.r_V) / 2)
    for j in range(data.r_V):
        arg = s - 0.5 * data.a_V * j
        if arg <= 0:
            raise ParameterDomainError(f"gamma argument {arg} <= 0")
        out *= math.gamma(arg)
    return out


def dixmier_constant_gamma_branch(desc: DomainDescriptor) -> float:
    """Gamma-quotient branch Gamma_V(p_V - (n-1)/r_V) / Gamma_V(p_V);
    the (2 pi) prefactors cancel in the quotient."""
    data = peirce1_data(desc)
    if data.reducible:
        raise UnsupportedFamilyError("gamma branch needs a != 2 or rank 1")
    if data.r_V == 0:
        return 1.0
    n = desc.n
    out = 1.0
    for j in range(data.r_V):
        shift = 0.5 * data.a_V * j
        num = data.p_V - (n - 1) / data.r_V - shift
        den = data.p_V - shift
        if num <= 0 or den <= 0:
            raise ParameterDomainError("gamma argument <= 0 in quotient")
        out *= math.gamma(num) / math.gamma(den)
    return out


def dixmier_constant_factorial_branch(desc: DomainDescriptor) -> float:
    """Split-space branch 1 / (Gamma(r) Gamma(r+b)), valid for a = 2."""
    if desc.a != 2:
        raise UnsupportedFamilyError("factorial branch needs a = 2")
    return 1.0 / (math.gamma(desc.r) * math.gamma(desc.r + desc.b))


def dixmier_constant(desc: DomainDescriptor) -> float:
    """Normalized contact volume of the rank-one manifold, by branch:
    gamma quotient for a != 2 or rank one, split-space value for a = 2."""
    if desc.a == 2 and desc.r > 1:
        return dixmier_constant_factorial_branch(desc)
    return dixmier_constant_gamma_branch(desc)


# ---------------------------------------------------------------------------
# sampling and the trace-formula right-hand side
# ---------------------------------------------------------------------------


def sample_S1_arrays(desc: DomainDescriptor, count: int, seed: int):
    """Model-coordinate samples of the invariant probability measure:
    (count, d) sphere points for the ball, or a (count, r+s) array of
    independent sphere pairs for matrix domains."""
    if count < 1:
        raise ParameterDomainError("count must be positive")
    rng = np.random.default_rng(seed)

    def sphere(npts, dim):
        z = rng.standard_normal((npts, dim)) + 1j * rng.standard_normal((npts, dim))
        return z / np.linalg.norm(z, axis=1, keepdims=True)

    if desc.family == "ball" or desc.r == 1:
        return sphere(count, desc.d)
    if desc.family != "I":
        raise UnsupportedFamilyError(f"sampler not implemented for {desc.label()}")
    r, s = desc.params
    return np.hstack([sphere(count, r), sphere(count, s)])


def sample_S1(desc: DomainDescriptor, count: int, seed: int) -> list[BoundaryPoint]:
    """Boundary-point view of ``sample_S1_arrays``."""
    arr = sample_S1_arrays(desc, count, seed)
    if desc.family == "ball" or desc.r == 1:
        return [BoundaryPoint("ball", arr[i]) for i in range(count)]
    r, s = desc.params
    out = []
    for i in range(count):
        xi1, xi2 = arr[i, :r], arr[i, r:]
        out.append(BoundaryPoint("rank-one", np.outer(xi1, xi2).reshape(-1),
                                 xi=(xi1, xi2), shape=(r, s)))
    return out


_CONVENTION = ("value = (V/n) * Re(mean prod_j {f_j,g_j} / i^n); "
               "V = dixmier_constant(desc); pinned by the ball d=2 shell oracle")


def _hat_pairs(fs, gs, desc):
    if len(fs) != desc.n or len(gs) != desc.n:
        raise ParameterDomainError(f"need exactly n={desc.n} symbol pairs")
    return ([poisson_hat_symbol(f, desc) for f in fs],
            [poisson_hat_symbol(g, desc) for g in gs])


def trace_formula_rhs(fs, gs, desc: DomainDescriptor, count: int, seed: int,
                  method: str = "symbolic", workers: int = 1) -> dict:
    """Monte-Carlo estimate of the geometric side of the trace formula.

    Draws ``count`` invariant samples, evaluates the product of boundary
    brackets of the Poisson-extended pairs, and normalizes by i^n and the
    calibrated constant V/n.  ``method="pointwise"`` forces the per-point
    two-form solve instead of the precompiled symbolic brackets.
    """
    fh, gh = _hat_pairs(fs, gs, desc)
    n = desc.n
    v_const = dixmier_constant(desc)
    if method == "symbolic":
        betas = [bracket_symbol(f, g, desc) for f, g in zip(fh, gh)]
        pts = sample_S1_arrays(desc, count, seed)
        prod = np.ones(count, dtype=complex)
        if workers > 1:
            from concurrent.futures import ProcessPoolExecutor
            chunks = np.array_split(np.arange(count), 4 * workers)
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(_eval_beta_product, betas, pts[ch]) for ch in chunks]
                prod = np.concatenate([f.result() for f in futures])
        else:
            prod = _eval_beta_product(betas, pts)
    elif method == "pointwise":
        points = sample_S1(desc, count, seed)
        prod = np.empty(count, dtype=complex)
        for idx, pt in enumerate(points):
            val = 1.0 + 0j
            for f, g in zip(fh, gh):
                val *= boundary_bracket(f, g, pt) / 1j
            prod[idx] = val
    else:
        raise ParameterDomainError(f"unknown method {method!r}")
    reals = prod.real
    mean = float(np.mean(reals))
    stderr = float(np.std(reals, ddof=1) / math.sqrt(count)) if count > 1 else float("inf")
    scale = v_const / n
    return {"value": scale * mean, "stderr": scale * stderr,
            "constant": scale, "convention": _CONVENTION,
            "raw_mean": mean, "raw_imag": float(np.mean(prod.imag))}


def _eval_beta_product(betas, pts):
    prod = np.ones(pts.shape[0], dtype=complex)
    for beta in betas:
        prod *= beta.evaluate_many(pts)
    return prod


def trace_formula_rhs_exact(fs, gs, desc: DomainDescriptor) -> dict:
    """Exact-moment evaluation of the trace-formula right-hand side.

    The bracket product is assembled symbolically on the model coordinates
    and integrated term by term against the invariant measure, so the
    result is exact up to the floating-point gamma constant.
    """
    fh, gh = _hat_pairs(fs, gs, desc)
    n = desc.n
    prod = SymbolPolynomial.constant(_peirce1_projection_symbols(desc)[1])
    for f, g in zip(fh, gh):
        prod = prod * bracket_symbol(f, g, desc)
    raw = moment_expectation(prod, desc)
    scale = dixmier_constant(desc) / n
    return {"value": scale * float(raw), "stderr": 0.0,
            "constant": scale, "convention": _CONVENTION,
            "raw_mean": float(raw),
            "raw_exact": raw if isinstance(raw, Fraction) else None}
