"""Degree-graded Hardy structure of the 2 x 2 matrix domain.

The boundary inner product on each graded slice is reconstructed from the
Fischer-Fock pairing and the Peter-Weyl weights: the determinant ideal is
peeled off degree by degree, each layer carries the weight 1/(rho)_lambda,
and their sum gives the full Hardy Gram matrix on polynomial coefficients.
This yields exact compressions of mixed-symbol Toeplitz operators on the
quotient module without any group integration, at small truncation.

Used for spot checks of the rank-one boundary modeling: the transported
quotient-module operator is compared against the model Toeplitz operator
with the Poisson-extended symbol.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .catalog import type_i
from .conical import ConicalContext, rep_dimension
from .errors import InternalConsistencyError, SymbolDomainError
from .geometry import poisson_hat_symbol
from .models import (GradedBasis, _multiindices, build_rank_one_model,
                     sphere_monomial_norm_sq, toeplitz_matrix, unitary_weight)
from .partitions import Partition, multivariate_pochhammer
from .symbols import SymbolPolynomial

_DET_TERMS = {((1, 0, 0, 1), (0, 0, 0, 0)): 1, ((0, 1, 1, 0), (0, 0, 0, 0)): -1}


def _det_symbol() -> SymbolPolynomial:
    return SymbolPolynomial(4, _DET_TERMS)


class Rank22Hardy:
    """Exact Hardy-space linear algebra on C^{2x2} up to a degree bound."""

    def __init__(self, max_degree: int):
        self.max_degree = max_degree
        self.desc = type_i(2, 2)
        self.ctx = ConicalContext(self.desc)
        self._mons = {g: _multiindices(4, g) for g in range(max_degree + 1)}
        self._index = {g: {mu: i for i, mu in enumerate(mons)}
                       for g, mons in self._mons.items()}
        self._weights = {g: np.array([float(_fact(mu)) for mu in mons])
                         for g, mons in self._mons.items()}
        self._components: dict[int, list[tuple[Partition, np.ndarray]]] = {}
        self._gram: dict[int, np.ndarray] = {}

    # -- polynomial plumbing -------------------------------------------------

    def multiplication_matrix(self, p: SymbolPolynomial, g: int) -> np.ndarray:
        """Matrix of multiplication by a holomorphic p: degree g -> g + deg p."""
        if not p.is_holomorphic():
            raise SymbolDomainError("multiplication matrix needs a holomorphic symbol")
        dp = p.degree
        rows, cols = self._mons[g + dp], self._mons[g]
        out = np.zeros((len(rows), len(cols)))
        tgt = self._index[g + dp]
        for j, mu in enumerate(cols):
            for (al, _), c in p.terms.items():
                nu = tuple(x + y for x, y in zip(mu, al))
                out[tgt[nu], j] += float(c)
        return out

    def _fock_orthonormalize(self, cols: np.ndarray, g: int, rank: int) -> np.ndarray:
        w_half = np.sqrt(self._weights[g])
        q, r = np.linalg.qr(w_half[:, None] * cols)
        keep = np.abs(np.diag(r)) > 1e-9 * max(1.0, np.abs(r).max())
        basis = q[:, keep] / w_half[:, None]
        if basis.shape[1] != rank:
            raise InternalConsistencyError(
                f"component rank {basis.shape[1]} != expected {rank} at degree {g}")
        return basis

    def components(self, g: int) -> list[tuple[Partition, np.ndarray]]:
        """Fock-orthonormal bases of the Peter-Weyl layers of degree g,
        peeled from the determinant ideal filtration."""
        if g in self._components:
            return self._components[g]
        det = _det_symbol()
        w = self._weights[g]
        layers: list[tuple[Partition, np.ndarray]] = []
        prev_basis: np.ndarray | None = None
        for j in range(g // 2, -1, -1):
            lam = Partition((g - j, j))
            # V_j = det^j * (all of degree g - 2j)
            cols = np.eye(len(self._mons[g - 2 * j]))
            mat = cols
            for power in range(j):
                mat = self.multiplication_matrix(det, g - 2 * j + 2 * power) @ mat
            dim_vj = sum(rep_dimension(self.ctx, Partition((g - t, t)))
                         for t in range(j, g // 2 + 1))
            basis_vj = self._fock_orthonormalize(mat, g, dim_vj)
            if prev_basis is None:
                comp = basis_vj
            else:
                overlap = (prev_basis.conj().T * w) @ basis_vj
                comp = self._fock_orthonormalize(basis_vj - prev_basis @ overlap,
                                                 g, rep_dimension(self.ctx, lam))
            layers.append((lam, comp))
            prev_basis = basis_vj
        self._components[g] = layers
        return layers

    def hardy_gram(self, g: int) -> np.ndarray:
        """Gram matrix of the boundary inner product on degree-g coefficients."""
        if g in self._gram:
            return self._gram[g]
        w = self._weights[g]
        gram = np.zeros((len(w), len(w)))
        for lam, comp in self.components(g):
            weight = 1.0 / float(Fraction(multivariate_pochhammer(self.ctx.rho, lam, 2)))
            wc = w[:, None] * comp
            gram += weight * (wc @ wc.conj().T)
        self._gram[g] = gram
        return gram

    def hardy_inner(self, g: int, x: np.ndarray, y: np.ndarray) -> float | complex:
        return x.conj().T @ self.hardy_gram(g) @ y

    def length_one_basis(self, m: int) -> np.ndarray:
        """Boundary-orthonormal basis of the degree-m length-one component."""
        lam = Partition((m,)) if m else Partition()
        for lam2, comp in self.components(m):
            if lam2 == lam:
                scale = math.sqrt(float(Fraction(
                    multivariate_pochhammer(self.ctx.rho, lam, 2))))
                return comp * scale
        raise InternalConsistencyError(f"no length-one component at degree {m}")

    # -- quotient-module operators -------------------------------------------

    def compressed_block(self, m: int, p: SymbolPolynomial, q: SymbolPolynomial) -> np.ndarray:
        """Level-m block of the quotient-module operator for conj(p) q:
        entries (p b_i | q b_j)_S on the length-one basis."""
        basis = self.length_one_basis(m)
        x = self.multiplication_matrix(p, m) @ basis
        y = self.multiplication_matrix(q, m) @ basis
        g = m + p.degree
        if q.degree != p.degree:
            raise SymbolDomainError("compressed_block needs equal degrees")
        return x.conj().T @ self.hardy_gram(g) @ y

    def transport(self, m: int, model: GradedBasis) -> np.ndarray:
        """Unitary identification of the level-m quotient slice with the
        rank-one model slice, in orthonormal coordinates."""
        basis = self.length_one_basis(m)
        rows = model.level_range(m)
        out = np.zeros((len(rows), basis.shape[1]), dtype=complex)
        wgt = math.sqrt(float(unitary_weight(self.desc, m)))
        for row_mon, mu in enumerate(self._mons[m]):
            label = ((mu[0] + mu[1], mu[2] + mu[3]), (mu[0] + mu[2], mu[1] + mu[3]))
            i = model.index[label] - rows.start
            nrm = math.sqrt(float(model.norm_sq[model.index[label]]))
            out[i, :] += wgt * nrm * basis[row_mon, :]
        return out

    def modeling_defect_singular_values(self, f: SymbolPolynomial, truncation: int
                                        ) -> np.ndarray:
        """Singular values (descending) of the difference between the
        transported quotient-module operator for f = sum conj(p) q and the
        model Toeplitz operator with the Poisson-extended symbol."""
        model = build_rank_one_model(2, 2, truncation + 2)
        f_hat = poisson_hat_symbol(f, self.desc)
        t_hat = toeplitz_matrix(model, f_hat)
        svs = []
        for m in range(truncation + 1):
            u_m = self.transport(m, model)
            block = np.zeros((model.level_dimension(m),) * 2, dtype=complex)
            for (gam, dl), c in f.terms.items():
                p = SymbolPolynomial.monomial(4, dl, (0,) * 4)
                q = SymbolPolynomial.monomial(4, gam, (0,) * 4)
                block += complex(c) * (u_m @ self.compressed_block(m, p, q) @ u_m.conj().T)
            block -= t_hat.level_block(m, m)
            svs.append(np.linalg.svd(block, compute_uv=False))
        out = np.concatenate(svs)
        return np.sort(out)[::-1]


def _fact(mu) -> int:
    out = 1
    for e in mu:
        out *= math.factorial(e)
    return out
