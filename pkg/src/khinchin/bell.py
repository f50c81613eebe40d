"""Exact combinatorial kernel: Bell polynomials and moment/cumulant transforms.

All operations are exact when fed exact inputs (int / Fraction); with floats
or mpmath values they degrade gracefully to the input arithmetic.  Two
independent evaluation routes for the normalized moments (the direct
partition-indexed sum and the complete-Bell route) are kept permanently as
mutual oracles.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial


@lru_cache(maxsize=None)
def _partition_multiplicities(n: int, max_part: int) -> tuple[tuple[int, ...], ...]:
    """All multiplicity vectors (m_1..m_n) with sum j*m_j = n, parts <= max_part."""
    if n == 0:
        return ((0,) * 0,)
    out: list[tuple[int, ...]] = []

    def descend(remaining: int, part: int, mults: dict[int, int]) -> None:
        if remaining == 0:
            vec = [0] * n
            for j, m in mults.items():
                vec[j - 1] = m
            out.append(tuple(vec))
            return
        if part < 1:
            return
        for count in range(remaining // part, -1, -1):
            if count:
                mults[part] = count
            descend(remaining - count * part, part - 1, mults)
            mults.pop(part, None)

    descend(n, min(max_part, n), {})
    return tuple(out)


def partitions_of(n: int, min_part: int = 1, max_part: int | None = None):
    """Multiplicity vectors (m_1..m_n) of partitions of n with part bounds."""
    if max_part is None:
        max_part = n
    for vec in _partition_multiplicities(n, max_part):
        if min_part > 1 and any(vec[j] for j in range(min_part - 1)):
            continue
        yield vec


def complete_bell(n, xs):
    """Complete exponential Bell polynomial B_n(x_1, ..., x_n)."""
    if n < 1 or len(xs) != n:
        raise ValueError("complete_bell needs n >= 1 and exactly n arguments")
    total = 0
    for vec in partitions_of(n):
        coeff = Fraction(factorial(n))
        term = 1
        skip = False
        for l, jl in enumerate(vec, start=1):
            if not jl:
                continue
            if xs[l - 1] == 0:
                skip = True
                break
            coeff /= Fraction(factorial(l)) ** jl * factorial(jl)
            term = term * xs[l - 1] ** jl
        if skip:
            continue
        total = total + _scale(coeff, term)
    return total


def incomplete_bell(n, k, xs):
    """Partial Bell polynomial B_{n,k}(x_1, ..., x_{n-k+1})."""
    if not 1 <= k <= n or len(xs) != n - k + 1:
        raise ValueError("incomplete_bell needs 1 <= k <= n and n-k+1 arguments")
    total = 0
    for vec in partitions_of(n, max_part=n - k + 1):
        if sum(vec) != k:
            continue
        coeff = Fraction(factorial(n))
        term = 1
        skip = False
        for l, jl in enumerate(vec[: n - k + 1], start=1):
            if not jl:
                continue
            if xs[l - 1] == 0:
                skip = True
                break
            coeff /= Fraction(factorial(l)) ** jl * factorial(jl)
            term = term * xs[l - 1] ** jl
        if skip:
            continue
        total = total + _scale(coeff, term)
    return total


def _scale(frac: Fraction, term):
    if isinstance(term, (int, Fraction)):
        return frac * term
    if frac.denominator == 1:
        return int(frac) * term
    return term * frac.numerator / frac.denominator


def normal_moment(n: int):
    """Integer moments of N(0,1): 0 for odd n, (2k)!/(k! 2^k) for n = 2k."""
    if n % 2:
        return 0
    k = n // 2
    return factorial(2 * k) // (factorial(k) * 2 ** k)


def normalized_moments_from_quotients(K: int, quotients):
    """Normalized moments nu_3..nu_K from fulcrum quotients [q_2=1, q_3, ..., q_K].

    nu_n = B_n(0, 1, q_3, ..., q_n).  Cross-checked internally against the
    direct partition-indexed sum; a mismatch means a broken kernel.
    """
    if K < 3:
        raise ValueError("K must be >= 3")
    q = list(quotients)
    if len(q) != K - 1 or q[0] != 1:
        raise ValueError("quotients must be [q_2=1, q_3, ..., q_K]")
    out = []
    for n in range(3, K + 1):
        xs = [0, 1] + q[1 : n - 1]
        via_bell = complete_bell(n, xs)
        via_sum = moment_partition_sum(n, q[: n - 1])
        _assert_close(via_bell, via_sum)
        out.append(via_bell)
    return out


def moment_partition_sum(n, quotients):
    """Direct partition-indexed evaluation of the normalized n-th moment.

    Independent of :func:`complete_bell`; enumerates multi-indices with
    2m_2 + ... + nm_n = n and sums n!/(m_2!...m_n!) prod (q_j/j!)^{m_j}.
    """
    q = [1] + list(quotients)[1:]  # q[j-2] is q_j for j >= 2
    total = 0
    for vec in partitions_of(n, min_part=2):
        coeff = Fraction(factorial(n))
        term = 1
        for j, mj in enumerate(vec, start=1):
            if not mj:
                continue
            coeff /= factorial(mj) * Fraction(factorial(j)) ** mj
            term = term * q[j - 2] ** mj
        total = total + _scale(coeff, term)
    return total


def quotients_from_normalized_moments(K: int, moments):
    """Fulcrum quotients q_3..q_K from normalized moments [nu_3, ..., nu_K].

    q_n = sum over multi-indices of n! (l-1)! (-1)^{l+1} / (m_2!..m_n!)
    prod (nu_j/j!)^{m_j} with nu_2 = 1; exact inverse of
    :func:`normalized_moments_from_quotients`.
    """
    if K < 3:
        raise ValueError("K must be >= 3")
    nu = [1] + list(moments)  # nu[j-2] is nu_j for j >= 2
    if len(nu) != K - 1:
        raise ValueError("moments must be [nu_3, ..., nu_K]")
    out = []
    for n in range(3, K + 1):
        total = 0
        for vec in partitions_of(n, min_part=2):
            l = sum(vec)
            coeff = Fraction(factorial(n) * factorial(l - 1) * (-1) ** (l + 1))
            term = 1
            for j, mj in enumerate(vec, start=1):
                if not mj:
                    continue
                coeff /= factorial(mj) * Fraction(factorial(j)) ** mj
                term = term * nu[j - 2] ** mj
            total = total + _scale(coeff, term)
        out.append(total)
    return out


def cumulants_from_raw_moments(raw):
    """Cumulants kappa_1..kappa_K from raw moments [mu'_1, ..., mu'_K].

    Standard recurrence kappa_n = mu'_n - sum_{k=1}^{n-1} C(n-1, k-1)
    kappa_k mu'_{n-k}.
    """
    mu = list(raw)
    kappa = []
    for n in range(1, len(mu) + 1):
        acc = mu[n - 1]
        for k in range(1, n):
            acc = acc - comb(n - 1, k - 1) * kappa[k - 1] * mu[n - k - 1]
        kappa.append(acc)
    return kappa


def central_moments_from_cumulants(kappa):
    """Central moments mu_2..mu_K via E((X-m)^n) = B_n(0, k_2, ..., k_n)."""
    out = []
    for n in range(2, len(kappa) + 1):
        xs = [0] + list(kappa[1:n])
        out.append(complete_bell(n, xs))
    return out


def _assert_close(a, b):
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        if a != b:
            raise AssertionError(f"Bell route mismatch: {a} != {b}")
        return
    fa, fb = float(a), float(b)
    scale = max(abs(fa), abs(fb), 1.0)
    if abs(fa - fb) > 1e-10 * scale:
        raise AssertionError(f"Bell route mismatch: {fa} vs {fb}")
