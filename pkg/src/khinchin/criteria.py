"""Gaussianity diagnostics: quotient trends, zero-free region, Euler harness.

The paper-level criteria are true limits; on finite grids we classify trends
with the documented thresholds below and label verdicts as "evidence", never
proof.  All thresholds live in THRESHOLDS and are echoed in reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
from mpmath import mp

from .errors import DomainError, GridError, QuadratureError
from .family import mean_variance
from .fulcrum import (
    cumulants_analytic,
    cumulants_from_distribution,
    fulcrum_derivative_analytic,
    has_analytic_route,
    quotients,
)
from .series import WORK_DPS, SeriesModel, eval_complex_on_circle, to_mpf
from .special import gamma, zeta

THRESHOLDS = {
    "vanishing_cut": 0.05,      # |Q(last)| below this fraction of the grid max
    "oscillation_band": 0.10,   # relative band for bounded-nonzero
    "divergence_factor": 2.0,   # growth factor for diverging
}

CLASS_VANISHING = "vanishing"
CLASS_BOUNDED = "bounded-nonzero"
CLASS_DIVERGING = "diverging"
CLASS_INCONCLUSIVE = "inconclusive"

VERDICT_GAUSSIAN = "gaussian-evidence"
VERDICT_NONGAUSSIAN = "non-gaussian-evidence"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass
class QuotientDiagnostics:
    t_grid: list
    kmax: int
    values: dict            # k -> list of Q_k(t_i)
    classifications: dict   # k -> classification string
    verdict: str
    thresholds: dict = field(default_factory=lambda: dict(THRESHOLDS))


@dataclass
class ZeroFreeReport:
    t: float
    sigma: float
    theta_max: float
    min_modulus: float
    samples: int


def default_grid(f: SeriesModel, points: int = 15):
    """Default diagnostic grid: R(1 - 2^-i) for finite R, 10^{i/2} for entire."""
    if math.isinf(f.radius):
        return [10.0 ** (i / 2.0) for i in range(points)]
    return [f.radius * (1.0 - 2.0 ** -i) for i in range(1, points)]


def classify_sequence(values) -> str:
    """Pure trend classification of one |Q_k| sequence (documented thresholds)."""
    absv = [abs(float(v)) for v in values]
    mx = max(absv)
    if mx == 0.0:
        return CLASS_VANISHING  # identically zero quotient
    last = absv[-1]
    half = absv[len(absv) // 2:]
    first_half = absv[: len(absv) // 2]
    nonincreasing = all(half[i + 1] <= half[i] for i in range(len(half) - 1))
    increasing = all(half[i + 1] >= half[i] for i in range(len(half) - 1))
    if last < THRESHOLDS["vanishing_cut"] * mx and nonincreasing:
        return CLASS_VANISHING
    if increasing and first_half and last > THRESHOLDS["divergence_factor"] * max(first_half):
        return CLASS_DIVERGING
    level = sum(half) / len(half)
    if level > 0 and max(abs(v - level) for v in half) / level < THRESHOLDS["oscillation_band"]:
        return CLASS_BOUNDED
    return CLASS_INCONCLUSIVE


def verdict_from_classifications(classes: dict) -> str:
    """gaussian-evidence iff all vanishing; non-gaussian-evidence iff all
    bounded with some bounded-nonzero; else inconclusive."""
    vals = list(classes.values())
    if all(c == CLASS_VANISHING for c in vals):
        return VERDICT_GAUSSIAN
    if all(c in (CLASS_VANISHING, CLASS_BOUNDED) for c in vals) and any(
        c == CLASS_BOUNDED for c in vals
    ):
        return VERDICT_NONGAUSSIAN
    return VERDICT_INCONCLUSIVE


def _check_grid(f: SeriesModel, t_grid) -> None:
    if len(t_grid) < 8:
        raise GridError("diagnostic grid needs at least 8 points")
    ts = [float(t) for t in t_grid]
    if any(ts[i + 1] <= ts[i] for i in range(len(ts) - 1)):
        raise GridError("grid must be strictly increasing")
    if math.isinf(f.radius):
        if ts[-1] / ts[0] < 10.0:
            raise GridError("grid must span a factor 10 in t for entire models")
    else:
        gap_first = f.radius - ts[0]
        gap_last = f.radius - ts[-1]
        if gap_last <= 0 or gap_first / gap_last < 10.0:
            raise GridError("grid must span a factor 10 in (R - t)")


def diagnose(f: SeriesModel, t_grid, K: int = 6,
             route_preference: str = "auto") -> QuotientDiagnostics:
    """Q_k over the grid plus trend classifications and the overall verdict."""
    if not 3 <= K <= 8:
        raise DomainError("K must lie in [3, 8]")
    _check_grid(f, t_grid)
    use_analytic = route_preference != "distribution" and has_analytic_route(f)
    if route_preference == "analytic" and not has_analytic_route(f):
        raise DomainError(f"model {f.kind!r} has no analytic route")
    values: dict = {k: [] for k in range(3, K + 1)}
    for t in t_grid:
        if use_analytic:
            cv = cumulants_analytic(f, t, K)
        else:
            cv = cumulants_from_distribution(f, t, K)
        qv = quotients(cv)
        for k in range(3, K + 1):
            values[k].append(qv.qs[k - 3])
    classes = {k: classify_sequence(values[k]) for k in values}
    return QuotientDiagnostics(
        t_grid=[float(t) for t in t_grid],
        kmax=K,
        values=values,
        classifications=classes,
        verdict=verdict_from_classifications(classes),
    )


def bounded_moments_report(diag: QuotientDiagnostics) -> dict:
    """Per-k boundedness flags: bounded iff vanishing or bounded-nonzero."""
    return {
        k: cls in (CLASS_VANISHING, CLASS_BOUNDED)
        for k, cls in diag.classifications.items()
    }


def zero_free_check(f: SeriesModel, t, samples: int = 128) -> ZeroFreeReport:
    """Min |f(t e^{i theta})| over |theta| <= 0.999 pi/(2 sigma_f(t))."""
    if samples < 64:
        raise DomainError("need at least 64 samples")
    mean, variance = mean_variance(f, t)
    sigma = mpmath.sqrt(variance)
    if not sigma > 0:
        raise DomainError("zero-free check needs positive variance")
    theta_max = math.pi / (2 * float(sigma))
    best = None
    for i in range(samples):
        frac = -0.999 + 2 * 0.999 * i / (samples - 1)
        theta = frac * theta_max
        modulus = abs(eval_complex_on_circle(f, t, theta, 1e-12))
        if best is None or modulus < best:
            best = modulus
    return ZeroFreeReport(
        t=float(t),
        sigma=float(sigma),
        theta_max=theta_max,
        min_modulus=float(best),
        samples=samples,
    )


# ---------------------------------------------------------------------------
# Euler-summation harness
# ---------------------------------------------------------------------------

def _simpson(fn, a, b, n):
    h = (b - a) / n
    acc = fn(a) + fn(b)
    acc += 4.0 * math.fsum(fn(a + (2 * i + 1) * h) for i in range(n // 2))
    acc += 2.0 * math.fsum(fn(a + 2 * i * h) for i in range(1, n // 2))
    return acc * h / 3.0


def _integrate(fn, points, tol, max_n=2 ** 21):
    """Composite Simpson per segment with interval doubling to tolerance."""
    acc = 0.0
    for a, b in zip(points[:-1], points[1:]):
        if b <= a:
            continue
        n = 64
        prev = _simpson(fn, a, b, n)
        while True:
            n *= 2
            cur = _simpson(fn, a, b, n)
            if abs(cur - prev) <= tol / max(1, len(points) - 1):
                acc += cur
                break
            if n >= max_n:
                raise QuadratureError("quadrature did not reach tolerance")
            prev = cur
    return acc


@dataclass
class EulerBoundRecord:
    m: int
    p: int
    k: int
    s: float
    lhs: float
    bound_s: float     # s * int |g'|
    bound_x: float     # int x |g'|
    holds: bool


def euler_bound_harness(m: int, p: int, k: int, s_grid, qtol=1e-8):
    """Check |s sum g(js) - int g| <= s int|g'| and <= int x|g'| for
    g(x) = k^{m-1} x^{pm} e^{-x^p k}."""
    if m < 0 or p < 1 or k < 1:
        raise DomainError("need m >= 0, p >= 1, k >= 1")
    kf = float(k)
    pref = kf ** (m - 1)

    def g(x):
        if x == 0.0:
            return pref if m == 0 else 0.0
        return pref * x ** (p * m) * math.exp(-(x ** p) * kf)

    def abs_gprime(x):
        if x <= 0.0:
            # Limit of |g'| as x -> 0+: nonzero when the x^{pm-1} power and
            # the (m - k x^p) factor combine to a constant.
            if m == 0:
                return kf * pref if p == 1 else 0.0
            return p * pref * m if p * m == 1 else 0.0
        return abs(p * pref * x ** (p * m - 1) * math.exp(-(x ** p) * kf)
                   * (m - kf * x ** p))

    x_star = (m / kf) ** (1.0 / p) if m > 0 else 0.0
    x_cut = ((80.0 + 10.0 * m) / kf) ** (1.0 / p) + x_star
    integral_g = _integrate(g, [0.0, max(x_star, 1e-6), x_cut], qtol)
    integral_gp = _integrate(abs_gprime, [0.0, x_star, x_cut], qtol)
    integral_xgp = _integrate(lambda x: x * abs_gprime(x),
                              [0.0, x_star, x_cut], qtol)
    out = []
    for s in s_grid:
        sf = float(s)
        if sf <= 0:
            raise DomainError("s must be positive")
        total = 0.0
        j = 1
        while True:
            term = g(j * sf)
            total += term
            if j * sf > x_star and term < 1e-18 * (total + 1e-300):
                break
            j += 1
            if j > 10 ** 8:
                raise QuadratureError("lattice sum did not converge")
        lhs = abs(sf * total - integral_g)
        b1 = sf * integral_gp
        b2 = integral_xgp
        holds = lhs <= b1 + qtol and lhs <= b2 + qtol
        out.append(EulerBoundRecord(m=m, p=p, k=k, s=sf, lhs=lhs,
                                    bound_s=b1, bound_x=b2, holds=holds))
    return out


# ---------------------------------------------------------------------------
# Asymptotic constants of the partition families
# ---------------------------------------------------------------------------

@dataclass
class AsymptoticRecord:
    s: float
    value: float      # s^alpha F^(m)(-s)
    constant: float   # the limiting constant C
    ratio: float


@dataclass
class AsymptoticReport:
    model: str
    m: int
    alpha: float
    constant: float
    records: list
    monotone_last_half: bool
    final_error: float


def asymptotic_constants(f: SeriesModel, m: int):
    """(alpha, C) with s^alpha F^(m)(-s) -> C as s -> 0 for partition models."""
    if f.kind == "partitions":
        p = f.params["p"]
        return m + 1.0 / p, (1.0 / p) * zeta(1 + 1.0 / p) * gamma(m + 1.0 / p)
    if f.kind == "macmahon":
        return m + 2.0, zeta(3.0) * gamma(m + 2.0)
    if f.kind == "density":
        return m + 1.0, (1.0 / f.params["d"]) * zeta(2.0) * gamma(m + 1.0)
    raise DomainError(f"no asymptotic constant for model {f.kind!r}")


def asymptotic_constant_check(f: SeriesModel, m: int, s_grid) -> AsymptoticReport:
    """Ratio s^alpha F^(m)(-s) / C over a decreasing s-grid."""
    ss = [float(s) for s in s_grid]
    if any(s <= 0 for s in ss) or any(ss[i + 1] >= ss[i] for i in range(len(ss) - 1)):
        raise DomainError("s-grid must be positive and strictly decreasing")
    alpha, constant = asymptotic_constants(f, m)
    records = []
    with mp.workdps(WORK_DPS):
        for s in ss:
            deriv = fulcrum_derivative_analytic(f, -to_mpf(s), m)
            value = float(to_mpf(s) ** to_mpf(alpha) * deriv)
            records.append(AsymptoticRecord(
                s=s, value=value, constant=constant, ratio=value / constant))
    half = [r.ratio for r in records[len(records) // 2 - 1:]]
    gaps = [abs(r - 1.0) for r in half]
    monotone = all(gaps[i + 1] <= gaps[i] for i in range(len(gaps) - 1))
    return AsymptoticReport(
        model=f.kind,
        m=m,
        alpha=alpha,
        constant=constant,
        records=records,
        monotone_last_half=monotone,
        final_error=abs(records[-1].ratio - 1.0),
    )
