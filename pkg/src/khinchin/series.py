"""Power series in class K: evaluation with certified truncation tails.

A :class:`SeriesModel` owns a deterministic coefficient stream (exact
rationals or high-precision reals), a radius, and a materialized prefix
cache.  All summation happens in mpmath arithmetic at >= 30 significant
digits; moments of these series near t -> R are hopeless in machine doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mp

from .errors import BudgetExceededError, DomainError

WORK_DPS = 40
DEFAULT_TERM_BUDGET = 10 ** 7


def to_mpf(x):
    """Convert int / Fraction / float / mpf to mpf without precision loss."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / mp.mpf(x.denominator)
    return mp.mpf(x)


@dataclass
class EvalResult:
    value: mpmath.mpf
    tail_bound: mpmath.mpf
    terms_used: int


@dataclass
class SeriesModel:
    """A power series in class K.

    ``prefix_fn(N)`` must return the deterministic coefficient list
    a_0..a_N; repeated calls for the same n always yield identical values.
    ``params`` carries model-specific data consumed by the analytic fulcrum
    routes; ``log_eval`` is an optional fast ln f(t) for product-form models.
    """

    kind: str
    radius: float  # math.inf for entire models
    prefix_fn: Callable[[int], list]
    params: dict = field(default_factory=dict)
    log_eval: Callable | None = None
    term_budget: int = DEFAULT_TERM_BUDGET
    _cache: list = field(default_factory=list, repr=False)

    def _ensure(self, n: int) -> None:
        if len(self._cache) <= n:
            # Grow geometrically so streaming evaluation is O(N) rebuilds.
            target = max(2 * n, 64)
            fresh = self.prefix_fn(target)
            if len(fresh) <= n:
                raise BudgetExceededError(
                    f"model {self.kind!r} cannot produce {n + 1} coefficients"
                )
            # Idempotent: an existing prefix never changes.
            self._cache = fresh

    def coefficients(self, n: int) -> list:
        """Materialized coefficient prefix a_0..a_n (idempotent fill)."""
        self._ensure(n)
        return self._cache[: n + 1]

    def coeff(self, n: int):
        self._ensure(n)
        return self._cache[n]

    def validate_class_k(self, probe: int = 12) -> None:
        coeffs = self.coefficients(probe)
        if not coeffs[0] > 0:
            raise DomainError("class K requires a_0 > 0")
        if any(c < 0 for c in coeffs):
            raise DomainError("class K requires non-negative coefficients")
        if self.kind in ("poly", "explicit") and not any(c > 0 for c in coeffs[1:]):
            raise DomainError("class K requires a non-constant series")


def _check_domain(f: SeriesModel, t) -> None:
    if t < 0:
        raise DomainError(f"t={t} must be non-negative")
    if t >= f.radius:
        raise DomainError(f"t={t} outside [0, {f.radius})")


def _comparison_point(f: SeriesModel, t):
    # Chernoff-style tail certification point t' in (t, R).
    if math.isinf(f.radius):
        return 2 * to_mpf(t)
    return mpmath.sqrt(to_mpf(t) * to_mpf(f.radius))


def _falling(n: int, order: int) -> int:
    out = 1
    for i in range(order):
        out *= n - i
    return out


def _certified_sum(f: SeriesModel, t, rel_tol, order: int = 0, theta=None):
    """Sum the (possibly derived, possibly rotated) series with a certified tail.

    Tail bound: sum_{n>N} c_n t^{n-order} <= U(t') (t/t')^{N+1-order} / (1 - t/t')
    where c_n = n(n-1)...(n-order+1) a_n and U(t') upper-bounds the derived
    series at the comparison point t'.
    """
    _check_domain(f, t)
    if not 0 < rel_tol < 1:
        raise DomainError("rel_tol must lie in (0, 1)")
    with mp.workdps(WORK_DPS):
        tm = to_mpf(t)
        if tm == 0:
            if order == 0:
                a0 = to_mpf(f.coeff(0))
                return EvalResult(a0, mp.mpf(0), 1)
            c = to_mpf(f.coeff(order)) * _falling(order, order)
            return EvalResult(c, mp.mpf(0), 1)
        t2 = _comparison_point(f, t)
        q = tm / t2
        phase = None
        if theta is not None:
            phase = mpmath.exp(1j * mp.mpf(theta))
        total = mp.mpf(0) if theta is None else mp.mpc(0)
        total_cmp = mp.mpf(0)
        tn = mp.mpf(1)  # t^{n-order} once n >= order
        t2n = t2 ** order
        rot = mp.mpc(1) if phase is not None else None
        quiet = 0
        n = order
        tiny_run = 0
        while n <= f.term_budget:
            a = to_mpf(f.coeff(n))
            c = a * _falling(n, order)
            term_abs = c * tn
            if phase is not None:
                total += c * tn * rot
            else:
                total += term_abs
            total_cmp += c * t2n
            # Declare the comparison-point sum converged after a stable run
            # of negligible terms, then certify the main tail.
            if c == 0 or (total_cmp > 0 and c * t2n <= mp.mpf("1e-18") * total_cmp):
                quiet += 1
            else:
                quiet = 0
            if quiet >= 5:
                upper = total_cmp * (1 + mp.mpf("1e-12"))
                tail = upper * q ** (n + 1 - order) / (1 - q)
                ref = abs(total)
                if ref > 0 and tail <= rel_tol * ref:
                    return EvalResult(total, tail, n - order + 1)
                if ref == 0 and tail <= rel_tol:
                    return EvalResult(total, tail, n - order + 1)
                tiny_run += 1
                if tiny_run > 2000 and tail <= mp.mpf("1e-25"):
                    # Fully converged in working precision.
                    return EvalResult(total, tail, n - order + 1)
            n += 1
            tn *= tm
            t2n *= t2
            if phase is not None:
                rot *= phase
        raise BudgetExceededError(
            f"tail bound unattainable within {f.term_budget} terms for {f.kind!r}"
        )


def eval_series(f: SeriesModel, t, rel_tol=1e-12) -> EvalResult:
    """f(t) = sum a_n t^n with certified relative error <= rel_tol."""
    return _certified_sum(f, t, rel_tol)


def eval_derivative(f: SeriesModel, t, order: int, rel_tol=1e-12) -> EvalResult:
    """order-th derivative of f at t, same tail-bound contract."""
    if not 1 <= order <= 8:
        raise DomainError("derivative order must be in [1, 8]")
    return _certified_sum(f, t, rel_tol, order=order)


def eval_complex_on_circle(f: SeriesModel, t, theta, rel_tol=1e-12):
    """f(t e^{i theta}) = sum a_n t^n e^{in theta} (an mpc value)."""
    res = _certified_sum(f, t, rel_tol, theta=theta)
    return res.value
