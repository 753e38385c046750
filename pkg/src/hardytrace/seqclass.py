"""Asymptotic sequences of the form c0 + c1/(m+1) + O(1/m^2).

Membership in the class (and its positive cone) is certified empirically:
a candidate sequence is fitted in the variable u = 1/(m+1) and the scaled
residuals m^2 |omega_m| are tracked per decade of m.  Bounded residual
sups across decades are the falsifiable proxy for the O(1/m^2) tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .conical import ConicalContext, conical_norm_sq_ratio
from .errors import InsufficientDataError, ParameterDomainError
from .partitions import Partition

Number = Fraction | float | int


@dataclass
class SequenceFit:
    """Two-term expansion c_m ~ c0 + c1/(m+1) with a residual certificate.

    ``remainder_bound`` is the empirical sup of m^2 |omega_m| over the
    sampled window; ``decade_sups`` is the same sup per decade of m,
    ordered by increasing m.
    """

    c0: Number
    c1: Number
    remainder_bound: float
    window: tuple[int, int]
    positive: bool
    decade_sups: list[float] = field(default_factory=list)

    def predict(self, m: int) -> Number:
        return self.c0 + self.c1 * Fraction(1, m + 1)

    def bounded_residuals(self, growth_factor: float = 4.0, atol: float = 1e-9) -> bool:
        """True when the per-decade residual sups show no growth trend:
        no decade sup exceeds ``growth_factor`` times the first decade's.
        A bounded tail keeps the ratios near 1; any power-law excess in
        omega_m compounds across decades and fails decisively."""
        sups = self.decade_sups
        if len(sups) < 2:
            return True
        ref = max(sups[0], atol * (1.0 + abs(float(self.c0))))
        return max(sups) <= growth_factor * ref

    def in_class_s(self, growth_factor: float = 4.0) -> bool:
        return self.bounded_residuals(growth_factor)

    def in_class_s_plus(self, growth_factor: float = 4.0) -> bool:
        return self.positive and self.bounded_residuals(growth_factor)


def _decade_edges(lo: int, hi: int) -> list[tuple[int, int]]:
    edges = []
    start = lo
    while start < hi:
        stop = min(hi, start * 10)
        edges.append((start, stop))
        start = stop
    return edges


def fit_asymptotics(samples: Mapping[int, Number],
                    window: tuple[int, int] | None = None) -> SequenceFit:
    """Fit c0, c1 from the two largest sample blocks, then certify.

    The two blocks are the top-m samples split in two groups; each block is
    averaged (both the value and the expansion variable u = 1/(m+1)) and
    the 2x2 linear system in (1, u) determines the fit.  Anchoring both
    blocks at the top of the window keeps the intercept bias of order
    1/m_top^2, so the scaled residuals m^2 |omega_m| of a genuine member
    stay bounded over the whole window.  Averaging preserves affine
    relations, so exactly affine sequences are recovered exactly.
    """
    if len(samples) < 8:
        raise InsufficientDataError("need at least 8 samples")
    ms = sorted(samples)
    lo, hi = ms[0], ms[-1]
    if lo < 1 or hi < 10 * lo:
        raise InsufficientDataError("samples must span at least one decade with m >= 1")
    if window is None:
        window = (lo, hi)

    k = max(2, len(ms) // 8)
    blocks = [ms[-k:], ms[-2 * k:-k]]

    exact = all(isinstance(samples[m], (int, Fraction)) for m in ms)

    def block_means(pts):
        n = len(pts)
        if exact:
            u = sum(Fraction(1, m + 1) for m in pts) / n
            c = sum(Fraction(samples[m]) for m in pts) / n
        else:
            u = sum(1.0 / (m + 1) for m in pts) / n
            c = sum(float(samples[m]) for m in pts) / n
        return u, c

    (u1, c1v), (u2, c2v) = block_means(blocks[0]), block_means(blocks[1])
    if u1 == u2:
        raise InsufficientDataError("degenerate sample blocks")
    slope = (c1v - c2v) / (u1 - u2)
    intercept = c1v - slope * u1

    decades = _decade_edges(lo, hi + 1)
    sups = [0.0] * len(decades)
    for m in ms:
        if exact:
            res = Fraction(samples[m]) - intercept - slope * Fraction(1, m + 1)
        else:
            res = float(samples[m]) - float(intercept) - float(slope) / (m + 1)
        val = float(abs(res)) * m * m
        for i, (a, b) in enumerate(decades):
            if a <= m < b:
                sups[i] = max(sups[i], val)
                break
    return SequenceFit(c0=intercept, c1=slope,
                       remainder_bound=max(sups) if sups else 0.0,
                       window=window, positive=intercept > 0,
                       decade_sups=sups)


def combine(f: SequenceFit, g: SequenceFit, op: str) -> SequenceFit:
    """Compose two fits by first-order expansion in u = 1/(m+1).

    Remainder bounds are propagated conservatively from the window minimum;
    quotients require the divisor to certify the positive class.
    """
    if op not in ("sum", "product", "quotient"):
        raise ParameterDomainError(f"unknown op {op!r}")
    lo = max(f.window[0], g.window[0])
    hi = min(f.window[1], g.window[1])
    if lo >= hi:
        raise ParameterDomainError("fits have disjoint windows")
    window = (lo, hi)
    c0, c1, R = f.c0, f.c1, f.remainder_bound
    d0, d1, S = g.c0, g.c1, g.remainder_bound
    u_hi = 1.0 / (lo + 1)
    supf = abs(float(c0)) + abs(float(c1)) * u_hi + R * u_hi * u_hi
    supg = abs(float(d0)) + abs(float(d1)) * u_hi + S * u_hi * u_hi

    if op == "sum":
        return SequenceFit(c0 + d0, c1 + d1, R + S, window,
                           positive=(c0 + d0) > 0)
    if op == "product":
        bound = (abs(float(c1 * d1)) + S * (abs(float(c0)) + abs(float(c1)))
                 + R * (abs(float(d0)) + abs(float(d1))) + R * S / (lo * lo))
        return SequenceFit(c0 * d0, c0 * d1 + c1 * d0, bound, window,
                           positive=(c0 * d0) > 0)
    # quotient
    if not g.positive:
        raise ParameterDomainError("quotient requires a positive-class divisor")
    low_g = float(d0) - abs(float(d1)) * u_hi - S * u_hi * u_hi
    if low_g <= 0:
        raise ParameterDomainError("divisor not bounded away from zero on window")
    lead = c0 / d0 if isinstance(c0, Fraction) and isinstance(d0, Fraction) \
        else float(c0) / float(d0)
    sub = (c1 * d0 - c0 * d1) / (d0 * d0) if isinstance(d0, Fraction) \
        else (float(c1) * float(d0) - float(c0) * float(d1)) / float(d0) ** 2
    curv = abs(float(d1)) * abs(float(c0) * float(d1) - float(c1) * float(d0))
    curv /= float(d0) ** 2 * low_g
    bound = curv + (R * supg + S * supf) / (low_g * low_g)
    return SequenceFit(lead, sub, bound, window, positive=lead > 0)


def sample_log_ints(lo: int, hi: int, per_decade: int = 16) -> list[int]:
    """Distinct integers spread log-uniformly over [lo, hi]."""
    if lo < 1 or hi <= lo:
        raise ParameterDomainError("need 1 <= lo < hi")
    count = max(8, int(per_decade * math.log10(hi / lo)) + 1)
    pts = {lo, hi}
    for t in range(count + 1):
        pts.add(round(lo * (hi / lo) ** (t / count)))
    return sorted(pts)


def norm_ratio_samples(ctx: ConicalContext, alpha: Partition, gamma: Partition,
                       k: int, window: tuple[int, int] = (10, 10_000),
                       per_decade: int = 16) -> dict[int, Fraction]:
    """Exact samples of m -> ||N_{(m-k, gamma)}||^2 / ||N_{(m, alpha)}||^2."""
    r = ctx.r
    if alpha.length > r - 1 or gamma.length > r - 1:
        raise ParameterDomainError("alpha, gamma must have fewer rows than the rank")
    if k < 0:
        raise ParameterDomainError("k must be nonnegative")
    for j in range(1, r):
        if k + gamma[j] < alpha[j]:
            raise ParameterDomainError(
                f"row {j}: need k + gamma_j >= alpha_j, got {k}+{gamma[j]} < {alpha[j]}")
    lo, hi = window
    m_floor = max(alpha[1] if alpha.length else 0, (gamma[1] if gamma.length else 0) + k, 1)
    if lo < m_floor:
        raise ParameterDomainError(f"window start {lo} below smallest valid m={m_floor}")
    out: dict[int, Fraction] = {}
    for m in sample_log_ints(lo, hi, per_decade):
        num = gamma.prepend(m - k)
        den = alpha.prepend(m)
        out[m] = conical_norm_sq_ratio(ctx, num, den)
    return out


def norm_ratio_sequence(ctx: ConicalContext, alpha: Partition, gamma: Partition,
                        k: int, window: tuple[int, int] = (10, 10_000),
                        per_decade: int = 16) -> SequenceFit:
    """Fit of the conical norm ratio sequence; positivity must hold."""
    samples = norm_ratio_samples(ctx, alpha, gamma, k, window, per_decade)
    fit = fit_asymptotics(samples, window)
    if not fit.positive:
        raise ParameterDomainError("norm ratio fit lost positivity; widen the window")
    return fit
