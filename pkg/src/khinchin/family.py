"""The Khinchin family (X_t): slices, moments, characteristic function, KS.

P(X_t = n) = a_n t^n / f(t).  Central moments use centered summation in
extended precision; the truncation window always reaches mean + 12 sigma
because order-K moments weight the tail by n^K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from mpmath import mp

from .errors import DomainError, TailTooHeavyError
from .series import (
    WORK_DPS,
    SeriesModel,
    eval_complex_on_circle,
    eval_derivative,
    eval_series,
    to_mpf,
)
from .special import normal_cdf


@dataclass
class DistributionSlice:
    t: float
    probs: list
    tail_mass_bound: float
    mean_hint: float
    sigma_hint: float


@dataclass
class MomentReport:
    t: float
    order: int
    mean: float
    variance: float
    raw: list        # mu'_1 .. mu'_K
    central: list    # mu_2 .. mu_K
    normalized: list  # nu_3 .. nu_K


def mean_variance(f: SeriesModel, t):
    """(m_f(t), sigma_f^2(t)) from the exact series identities."""
    if t < 0 or t >= f.radius:
        raise DomainError(f"t={t} outside [0, {f.radius})")
    if t == 0:
        return mp.mpf(0), mp.mpf(0)
    with mp.workdps(WORK_DPS):
        tm = to_mpf(t)
        fv = eval_series(f, t, 1e-20).value
        d1 = eval_derivative(f, t, 1, 1e-20).value
        d2 = eval_derivative(f, t, 2, 1e-20).value
        r1 = d1 / fv
        mean = tm * r1
        variance = mean + tm * tm * (d2 / fv - r1 * r1)
        return mean, variance


def distribution(f: SeriesModel, t, tail_tol=1e-12) -> DistributionSlice:
    """Truncated law of X_t with certified tail mass <= tail_tol."""
    if not 0 < t < f.radius:
        raise DomainError(f"t={t} outside (0, {f.radius})")
    if not 0 < tail_tol <= 1e-3:
        raise DomainError("tail_tol must lie in (0, 1e-3]")
    with mp.workdps(WORK_DPS):
        tm = to_mpf(t)
        mean, variance = mean_variance(f, t)
        sigma = mpmath.sqrt(variance)
        n_floor = int(mpmath.ceil(mean + 12 * sigma)) + 1
        # Reuse the series tail machinery: mass beyond N is the series tail
        # of f at t divided by f(t).
        fv = eval_series(f, t, 1e-20)
        upper, q = _comparison_upper(f, tm)
        # Tail mass bound upper * q^{n+1} / (1-q) / f(t): solve for n.
        target = to_mpf(tail_tol) * fv.value * (1 - q) / upper
        n_tail = int(mpmath.ceil(mpmath.log(target) / mpmath.log(q))) if target < 1 else 0
        n = max(n_floor, n_tail)
        tail = upper * q ** (n + 1) / (1 - q) / fv.value
        # Widen until the bound survives the heaviest moment weight (order
        # <= 12): geometric tail decay always beats the polynomial factor.
        if sigma > 0:
            while tail * max(mp.mpf(1), (n - mean) / sigma) ** 12 > tail_tol:
                n = n + max(16, n // 8)
                tail = upper * q ** (n + 1) / (1 - q) / fv.value
        coeffs = f.coefficients(n)
        probs = [to_mpf(c) * tm ** k / fv.value for k, c in enumerate(coeffs)]
        return DistributionSlice(
            t=t,
            probs=probs,
            tail_mass_bound=float(tail),
            mean_hint=float(mean),
            sigma_hint=float(sigma),
        )


def _comparison_upper(f: SeriesModel, tm):
    # Chernoff-style certificate data: an upper bound for f(t') at the
    # comparison point t' (2t entire, sqrt(tR) finite) and the ratio q = t/t'.
    from .series import _comparison_point

    t2 = _comparison_point(f, tm)
    q = tm / t2
    if f.log_eval is not None:
        return mpmath.exp(f.log_eval(t2)) * (1 + mp.mpf("1e-12")), q
    total = mp.mpf(0)
    quiet = 0
    k = 0
    while quiet < 5:
        term = to_mpf(f.coeff(k)) * t2 ** k
        total += term
        if total > 0 and term <= mp.mpf("1e-18") * total:
            quiet += 1
        else:
            quiet = 0
        k += 1
    return total * (1 + mp.mpf("1e-12")), q


def direct_moments(slc: DistributionSlice, K: int) -> MomentReport:
    """Raw/central/normalized moments to order K by centered summation."""
    if not 2 <= K <= 10:
        raise DomainError("moment order K must lie in [2, 10]")
    with mp.workdps(WORK_DPS):
        probs = slc.probs
        n_max = len(probs) - 1
        mean = mpmath.fsum(n * p for n, p in enumerate(probs))
        central = []
        for k in range(2, K + 1):
            central.append(mpmath.fsum((n - mean) ** k * p for n, p in enumerate(probs)))
        variance = central[0]
        sigma = mpmath.sqrt(variance)
        # Order-K tail estimate: a tail point sits at >= (n_max - mean)/sigma
        # standardized units; its k-th power times the tail mass must be dust.
        if sigma > 0:
            z_edge = (n_max - mean) / sigma
            if abs(z_edge) ** K * slc.tail_mass_bound > 1e-9:
                raise TailTooHeavyError(
                    f"order-{K} tail estimate exceeds 1e-9 for t={slc.t}"
                )
        raw = []
        for k in range(1, K + 1):
            acc = mp.mpf(0)
            for j in range(0, k + 1):
                c = central[j - 2] if j >= 2 else (mp.mpf(1) if j == 0 else mp.mpf(0))
                acc += mpmath.binomial(k, j) * c * mean ** (k - j)
            raw.append(acc)
        normalized = [central[k - 2] / sigma ** k for k in range(3, K + 1)]
        return MomentReport(
            t=slc.t,
            order=K,
            mean=mean,
            variance=variance,
            raw=raw,
            central=central,
            normalized=normalized,
        )


def characteristic_normalized(f: SeriesModel, t, theta):
    """E(e^{i theta X_t/sigma}) e^{-i theta m/sigma} = f(te^{i theta/sigma})/f(t) ...

    The characteristic function of the normalized family at angle theta.
    """
    if not 0 < t < f.radius:
        raise DomainError(f"t={t} outside (0, {f.radius})")
    with mp.workdps(WORK_DPS):
        mean, variance = mean_variance(f, t)
        sigma = mpmath.sqrt(variance)
        th = to_mpf(theta)
        num = eval_complex_on_circle(f, t, th / sigma, 1e-16)
        den = eval_series(f, t, 1e-16).value
        return num / den * mpmath.exp(-1j * th * mean / sigma)


def ks_distance_to_normal(slc: DistributionSlice) -> float:
    """sup_x |CDF(breve X_t)(x) - Phi(x)|, evaluated at the lattice jumps."""
    mean = slc.mean_hint
    sigma = slc.sigma_hint
    if sigma <= 0:
        raise DomainError("KS distance needs positive variance")
    best = 0.0
    cum = 0.0
    for n, p in enumerate(slc.probs):
        x = (n - mean) / sigma
        phi = normal_cdf(x)
        before = abs(cum - phi)
        cum += float(p)
        after = abs(cum - phi)
        if before > best:
            best = before
        if after > best:
            best = after
    return min(best, 1.0)
