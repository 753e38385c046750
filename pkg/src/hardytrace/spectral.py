"""Eigenvalue extraction, Macaev-ideal diagnostics and Dixmier estimation.

Spectral work consumes the exact operator models after restriction to their
valid sub-block and conversion to floating point.  Graded structure is
exploited: operators whose entries connect a single level shift decompose
into per-level blocks and are solved blockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conical import ConicalContext, graded_dimension
from .errors import InsufficientDataError, ParameterDomainError
from .models import TruncatedOperator


@dataclass
class SpectralReport:
    """Singular values (descending, nonnegative) of a valid sub-block.

    ``eigenvalues`` is present for hermitian inputs solved with signs; it is
    ordered by descending magnitude with ties broken by original index.
    """

    values: np.ndarray
    valid_count: int
    metadata: dict = field(default_factory=dict)
    eigenvalues: np.ndarray | None = None

    def signed_or_absolute(self) -> np.ndarray:
        return self.eigenvalues if self.eigenvalues is not None else self.values


def _stable_desc_sort(vals: np.ndarray, key: np.ndarray) -> np.ndarray:
    order = np.argsort(-key, kind="stable")
    return vals[order]


def _is_hermitian(mat: np.ndarray, tol: float = 1e-11) -> bool:
    return bool(np.allclose(mat, mat.conj().T, atol=tol))


def singular_values(op: TruncatedOperator, signed: bool = False,
                    metadata: dict | None = None) -> SpectralReport:
    """Singular values of the operator restricted to its valid sub-block.

    Level-preserving operators are solved blockwise; operators with a single
    nonzero level shift are solved by per-level SVD of the shifted blocks.
    ``signed=True`` additionally reports signed eigenvalues (hermitian
    blocks only).
    """
    vmax = min(op.valid_degree, op.basis.truncation)
    if vmax < 0:
        raise ParameterDomainError("empty valid block")
    basis = op.basis
    n_valid = basis.level_start[vmax + 1]
    lv = basis.level_of
    shifts = {lv[i] - lv[j] for (i, j) in op.entries if i < n_valid and j < n_valid}

    sv_parts: list[np.ndarray] = []
    eig_parts: list[np.ndarray] = []
    hermitian = True
    if shifts <= {0}:
        for m in range(vmax + 1):
            block = op.level_block(m, m)
            if block.size == 0:
                continue
            if _is_hermitian(block):
                w = np.linalg.eigvalsh(block)
                eig_parts.append(w)
                sv_parts.append(np.abs(w))
            else:
                hermitian = False
                sv_parts.append(np.linalg.svd(block, compute_uv=False))
    elif len(shifts) == 1:
        hermitian = False
        (kappa,) = shifts
        for m in range(vmax + 1):
            if not 0 <= m + kappa <= vmax:
                continue
            block = op.level_block(m + kappa, m)
            if block.size:
                sv_parts.append(np.linalg.svd(block, compute_uv=False))
    else:
        dense = op.to_orthonormal_dense(vmax)
        if signed and _is_hermitian(dense):
            w = np.linalg.eigvalsh(dense)
            eig_parts.append(w)
            sv_parts.append(np.abs(w))
        else:
            hermitian = False
            sv_parts.append(np.linalg.svd(dense, compute_uv=False))

    sv = np.concatenate(sv_parts) if sv_parts else np.zeros(0)
    missing = n_valid - len(sv)
    if missing > 0:  # levels the operator annihilates entirely
        sv = np.concatenate([sv, np.zeros(missing)])
    report = SpectralReport(values=_stable_desc_sort(sv, sv),
                            valid_count=n_valid,
                            metadata=metadata or {})
    if signed and hermitian:
        ev = np.concatenate(eig_parts) if eig_parts else np.zeros(0)
        if missing > 0:
            ev = np.concatenate([ev, np.zeros(n_valid - len(ev))])
        report.eigenvalues = _stable_desc_sort(ev, np.abs(ev))
    return report


def macaev_diagnostic(report: SpectralReport, n: int,
                      fit_window: tuple[int, int] | None = None) -> dict:
    """Weak-Schatten diagnostics for membership in the n-Macaev class.

    Returns the sup of j^(1/n) lambda_j, the least-squares slope of
    log lambda_j against log j, and the normalized partial sums
    (S_j / j^(1-1/n), or S_j / log j when n = 1) on a geometric j-grid.
    """
    if n < 1:
        raise ParameterDomainError("need n >= 1")
    lam = report.values
    j = np.arange(1, len(lam) + 1, dtype=float)
    sup_stat = float(np.max(j ** (1.0 / n) * lam)) if len(lam) else 0.0

    pos = lam > 0
    lo, hi = fit_window or (1, len(lam))
    sel = pos & (j >= lo) & (j <= hi)
    if sel.sum() >= 2:
        A = np.vstack([np.ones(sel.sum()), np.log(j[sel])]).T
        coef, *_ = np.linalg.lstsq(A, np.log(lam[sel]), rcond=None)
        slope = float(coef[1])
    else:
        slope = float("nan")

    csum = np.cumsum(lam)
    grid = np.unique(np.geomspace(2, len(lam), num=24).astype(int)) if len(lam) >= 2 else []
    ratios = []
    for N in grid:
        denom = math.log(N) if n == 1 else N ** (1.0 - 1.0 / n)
        ratios.append((int(N), float(csum[N - 1] / denom)))
    return {"sup_stat": sup_stat, "slope": slope, "partial_sum_ratio": ratios}


def dixmier_estimate(report: SpectralReport, grid_halvings: int = 6,
                     min_values: int = 100) -> dict:
    """Dixmier trace by extrapolated logarithmic means.

    Computes Lambda_N = (sum_{j<=N} lambda_j)/log N on the geometric grid
    N_k = ceil(N_max 2^-k) and fits Lambda_N = t + kappa/log N; the
    intercept t estimates the trace, stderr is the fit residual RMS.
    Signed eigenvalues are used when the report carries them.
    """
    lam = report.signed_or_absolute()
    if len(lam) < min_values:
        raise InsufficientDataError(
            f"need at least {min_values} spectral values, got {len(lam)}")
    csum = np.cumsum(lam)
    n_max = len(lam)
    grid = sorted({max(2, math.ceil(n_max * 2.0 ** (-k))) for k in range(grid_halvings)})
    xs = np.array([1.0 / math.log(N) for N in grid])
    ys = np.array([csum[N - 1] / math.log(N) for N in grid])
    A = np.vstack([np.ones_like(xs), xs]).T
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = ys - A @ coef
    stderr = float(np.sqrt(np.mean(resid ** 2)))
    curve = [(int(N), float(y)) for N, y in zip(grid, ys)]
    return {"limit": float(coef[0]), "fit_curve": curve, "stderr": stderr}


def resolvent_partial_sum_stat(ctx: ConicalContext, j_grid: list[int]) -> list[tuple[int, float]]:
    """Normalized partial sums S_j / j^(1-1/n) of the grading resolvent,
    computed from exact dimension data alone (no matrices).

    The resolvent has eigenvalue 1/(m+1) with multiplicity equal to the
    graded dimension at level m, already in descending order.
    """
    n = ctx.desc.n
    j_max = max(j_grid)
    counts = [0]
    sums = [0.0]
    m = 0
    while counts[-1] < j_max:
        dim = graded_dimension(ctx, m)
        counts.append(counts[-1] + dim)
        sums.append(sums[-1] + dim / (m + 1))
        m += 1
    out = []
    for j in sorted(j_grid):
        k = np.searchsorted(counts, j)
        # j falls inside shell k-1 (counts[k-1] < j <= counts[k])
        shell = k - 1
        s_j = sums[shell] + (j - counts[shell]) / (shell + 1)
        out.append((j, s_j / j ** (1.0 - 1.0 / n)))
    return out
