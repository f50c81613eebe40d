"""Builders for the model families under study, plus the spec mini-language.

Grammar accepted by :func:`parse_model`:

    exp | geometric | poly:c0,c1,... | partitions:p=<int> | macmahon
    | density:a=<int>,d=<int> | canonical:rho=<float>,J=<int>
    | canonical-list:b1,b2,... | expof:<spec> | expiter:k=<int>
    | explicit:<path>

Partition-type coefficient streams are exact big integers built by iterative
truncated-product convolution, so the brute-force enumeration oracles can be
bit-equality tests.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
from mpmath import mp

from .errors import BudgetExceededError, DomainError, ModelSpecError
from .series import WORK_DPS, SeriesModel, eval_series, to_mpf

DEGREE_BUDGET = 200_000


def _convolve_parts(parts_with_weights, n: int) -> list[int]:
    """Expand prod (1 - z^P)^{-w} to degree n by sparse geometric convolution."""
    if n > DEGREE_BUDGET:
        raise BudgetExceededError(f"degree {n} exceeds budget {DEGREE_BUDGET}")
    a = [0] * (n + 1)
    a[0] = 1
    for part, weight in parts_with_weights:
        if part > n:
            continue  # contributes nothing below the truncation degree
        for _ in range(weight):
            for m in range(part, n + 1):
                a[m] += a[m - part]
    return a


_EXACT_HEAD = 128


def _exp_prefix(n: int) -> list:
    # Exact 1/k! for small k; beyond that the factorials have thousands of
    # digits and extended-precision reals are both faster and plenty accurate.
    out = [Fraction(1)]
    for k in range(1, min(n, _EXACT_HEAD) + 1):
        out.append(out[-1] / k)
    if n > _EXACT_HEAD:
        with mp.workdps(WORK_DPS):
            c = to_mpf(out[-1])
            for k in range(_EXACT_HEAD + 1, n + 1):
                c = c / k
                out.append(c)
    return out


def build_exp() -> SeriesModel:
    return SeriesModel(
        kind="exp",
        radius=math.inf,
        prefix_fn=_exp_prefix,
        log_eval=to_mpf,
    )


def build_geometric() -> SeriesModel:
    return SeriesModel(
        kind="geometric",
        radius=1.0,
        prefix_fn=lambda n: [1] * (n + 1),
    )


def build_poly(coeffs) -> SeriesModel:
    cs = list(coeffs)
    if not cs:
        raise ModelSpecError("poly needs at least one coefficient")
    if any(c < 0 for c in cs):
        raise ModelSpecError("poly coefficients must be non-negative")
    if not any(c > 0 for c in cs[1:]):
        raise ModelSpecError("poly must be non-constant")
    # c0 = 0 is allowed here so the series can serve as the inner g of an
    # exponential composite; class-K membership is checked on the outer model.

    def prefix(n):
        return cs[: n + 1] + [0] * max(0, n + 1 - len(cs))

    return SeriesModel(kind="poly", radius=math.inf, prefix_fn=prefix,
                       params={"coeffs": cs})


def build_partitions(p: int) -> SeriesModel:
    if p < 1:
        raise ModelSpecError("partitions requires p >= 1")

    def prefix(n):
        if p == 1:
            return _partition_numbers(n)
        parts = []
        j = 1
        while j ** p <= n:
            parts.append((j ** p, 1))
            j += 1
        return _convolve_parts(parts, n)

    def log_eval(t):
        return _product_log(lambda j: j ** p, t)

    return SeriesModel(kind="partitions", radius=1.0, prefix_fn=prefix,
                       params={"p": p}, log_eval=log_eval)


def _partition_numbers(n: int) -> list[int]:
    """p(0..n) by Euler's pentagonal-number recurrence (exact integers)."""
    if n > DEGREE_BUDGET:
        raise BudgetExceededError(f"degree {n} exceeds budget {DEGREE_BUDGET}")
    p = [0] * (n + 1)
    p[0] = 1
    for m in range(1, n + 1):
        acc = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            acc += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                acc += sign * p[m - g2]
            k += 1
        p[m] = acc
    return p


def _macmahon_numbers(n: int) -> list[int]:
    """Plane-partition counts via m*a_m = sum sigma_2(j) a_{m-j} (exact)."""
    if n > DEGREE_BUDGET:
        raise BudgetExceededError(f"degree {n} exceeds budget {DEGREE_BUDGET}")
    sigma2 = [0] * (n + 1)
    for d in range(1, n + 1):
        d2 = d * d
        for m in range(d, n + 1, d):
            sigma2[m] += d2
    a = [0] * (n + 1)
    a[0] = 1
    for m in range(1, n + 1):
        acc = 0
        for j in range(1, m + 1):
            acc += sigma2[j] * a[m - j]
        a[m] = acc // m
    return a


def build_macmahon() -> SeriesModel:
    def prefix(n):
        return _macmahon_numbers(n)

    def log_eval(t):
        with mp.workdps(WORK_DPS):
            tm = to_mpf(t)
            acc = mp.mpf(0)
            j = 1
            while True:
                term = -j * mpmath.log(1 - tm ** j)
                acc += term
                if j > 8 and term < mp.mpf("1e-45") * acc:
                    break
                j += 1
            return acc

    return SeriesModel(kind="macmahon", radius=1.0, prefix_fn=prefix,
                       log_eval=log_eval)


def build_density(a: int, d: int) -> SeriesModel:
    if a < 1 or d < 1:
        raise ModelSpecError("density requires a >= 1 and d >= 1")

    def prefix(n):
        parts = [(j, 1) for j in range(a, n + 1, d)]
        return _convolve_parts(parts, n)

    def log_eval(t):
        return _product_log(lambda j: a + (j - 1) * d, t)

    return SeriesModel(kind="density", radius=1.0, prefix_fn=prefix,
                       params={"a": a, "d": d}, log_eval=log_eval)


def _product_log(part_fn, t):
    # ln prod 1/(1 - t^{part_fn(j)}) for t in (0, 1).
    with mp.workdps(WORK_DPS):
        tm = to_mpf(t)
        acc = mp.mpf(0)
        j = 1
        while True:
            term = -mpmath.log(1 - tm ** part_fn(j))
            acc += term
            if j > 8 and term < mp.mpf("1e-45") * (acc + 1):
                break
            j += 1
        return acc


def _canonical_model(zeros, kind_params) -> SeriesModel:
    bs = [to_mpf(b) for b in zeros]
    if any(b <= 0 for b in bs):
        raise ModelSpecError("canonical zeros must be positive")
    if any(bs[i] > bs[i + 1] for i in range(len(bs) - 1)):
        raise ModelSpecError("canonical zeros must be non-decreasing")

    def prefix(n):
        with mp.workdps(WORK_DPS):
            a = [mp.mpf(0)] * (n + 1)
            a[0] = mp.mpf(1)
            top = 0
            for b in bs:
                inv = 1 / b
                top = min(top + 1, n)
                for m in range(top, 0, -1):
                    a[m] += a[m - 1] * inv
            return a

    def log_eval(t):
        with mp.workdps(WORK_DPS):
            tm = to_mpf(t)
            return mpmath.fsum(mpmath.log(1 + tm / b) for b in bs)

    return SeriesModel(kind="canonical", radius=math.inf, prefix_fn=prefix,
                       params=dict(kind_params, zeros=bs), log_eval=log_eval)


def build_canonical(rho: float, J: int) -> SeriesModel:
    """Canonical product with zeros b_j = j^{1/rho}, truncated at J zeros."""
    if not 0 < rho < 1:
        raise ModelSpecError("canonical requires rho in (0, 1)")
    if J < 1:
        raise ModelSpecError("canonical requires J >= 1")
    with mp.workdps(WORK_DPS):
        zeros = [mpmath.power(j, 1 / mp.mpf(rho)) for j in range(1, J + 1)]
    return _canonical_model(zeros, {"rho": rho, "J": J})


def build_canonical_list(zeros) -> SeriesModel:
    return _canonical_model(zeros, {"J": len(list(zeros))})


def build_exp_of(inner: SeriesModel) -> SeriesModel:
    """f = e^g via the exponential-of-series recurrence b_n = (1/n) sum k a_k b_{n-k}."""

    def prefix(n):
        a = inner.coefficients(n)
        exact = all(isinstance(c, (int, Fraction)) for c in a) and a[0] == 0
        if exact:
            b = [Fraction(1)] + [Fraction(0)] * n
        else:
            with mp.workdps(WORK_DPS):
                b = [mpmath.exp(to_mpf(a[0]))] + [mp.mpf(0)] * n
        for m in range(1, n + 1):
            acc = 0
            for k in range(1, m + 1):
                if a[k]:
                    acc += k * _as(a[k], exact) * b[m - k]
            if exact:
                b[m] = Fraction(acc, m)
            else:
                b[m] = acc / m
        return b

    def log_eval(t):
        return eval_series(inner, t, 1e-20).value

    return SeriesModel(kind="expof", radius=inner.radius, prefix_fn=prefix,
                       params={"inner": inner}, log_eval=log_eval)


def _as(c, exact):
    return c if exact else to_mpf(c)


def build_exp_iter(k: int) -> SeriesModel:
    """k-fold iterate of the exponential: expiter(1) = e^z, expiter(2) = e^{e^z}, ..."""
    if k < 1:
        raise ModelSpecError("expiter requires k >= 1")
    model = build_exp()
    for _ in range(k - 1):
        model = build_exp_of(model)
    model.kind = "expiter" if k > 1 else "exp"
    model.params["k"] = k
    return model


def build_explicit(coeffs) -> SeriesModel:
    cs = [Fraction(str(c)) if not isinstance(c, (int, Fraction)) else Fraction(c)
          for c in coeffs]
    model = build_poly(cs)
    model.kind = "explicit"
    return model


def density_set_members(a: int, d: int, count: int) -> list[int]:
    """First `count` members of the arithmetic progression a, a+d, a+2d, ..."""
    if a < 1 or d < 1:
        raise DomainError("progression requires a >= 1 and d >= 1")
    return [a + i * d for i in range(count)]


def clan_ratio_curve(f: SeriesModel, t_grid):
    """sigma_f(t)/m_f(t) along the grid with a clan-evidence classification."""
    from .family import mean_variance

    ratios = []
    for t in t_grid:
        m, v = mean_variance(f, t)
        if m <= 0:
            raise DomainError("clan ratio undefined at zero mean")
        ratios.append(mpmath.sqrt(v) / m)
    tail = ratios[len(ratios) // 2:]
    decreasing = all(tail[i + 1] < tail[i] for i in range(len(tail) - 1))
    verdict = "clan-evidence" if decreasing and ratios[-1] < 0.1 else "no-clan-evidence"
    return ratios, verdict


def clan_asymptotic_ratio(g: SeriesModel, t, k: int):
    """g^(k)(t) g(t)^{k-1} / g'(t)^k, which tends to 1 along clan models."""
    from .series import eval_derivative

    if k < 2:
        raise DomainError("ratio defined for k >= 2")
    with mp.workdps(WORK_DPS):
        gv = eval_series(g, t, 1e-16).value
        g1 = eval_derivative(g, t, 1, 1e-16).value
        gk = eval_derivative(g, t, k, 1e-16).value
        if g1 <= 0:
            raise DomainError("ratio undefined where g' vanishes")
        return gk * gv ** (k - 1) / g1 ** k


def order_estimate(f: SeriesModel, t_grid) -> float:
    """Least-squares slope of ln ln f(t) against ln t over the top decade."""
    if not math.isinf(f.radius):
        raise DomainError("order estimate requires an entire model")
    ts = sorted(float(t) for t in t_grid)
    if ts[0] <= 0 or ts[-1] / ts[0] < 1e3:
        raise DomainError("grid must span at least 3 decades of t")
    top = [t for t in ts if t >= ts[-1] / 10.0]
    xs, ys = [], []
    for t in top:
        lf = f.log_eval(t) if f.log_eval else mpmath.log(eval_series(f, t, 1e-12).value)
        xs.append(math.log(t))
        ys.append(math.log(float(lf)))
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


def _parse_kv(body: str, spec: dict):
    out = {}
    for item in body.split(","):
        if "=" not in item:
            raise ModelSpecError(f"expected key=value, got {item!r}")
        key, val = item.split("=", 1)
        key = key.strip()
        if key not in spec:
            raise ModelSpecError(f"unknown key {key!r}")
        try:
            out[key] = spec[key](val)
        except ValueError as exc:
            raise ModelSpecError(f"bad value for {key!r}: {val!r}") from exc
    missing = set(spec) - set(out)
    if missing:
        raise ModelSpecError(f"missing keys: {sorted(missing)}")
    return out


def parse_model(text: str, validate: bool = True) -> SeriesModel:
    """Parse the model mini-language into a validated SeriesModel."""
    text = text.strip()
    head, _, body = text.partition(":")
    try:
        if head == "exp":
            model = build_exp()
        elif head == "geometric":
            model = build_geometric()
        elif head == "poly":
            model = build_poly([Fraction(c.strip()) for c in body.split(",")])
        elif head == "partitions":
            model = build_partitions(**_parse_kv(body, {"p": int}))
        elif head == "macmahon":
            model = build_macmahon()
        elif head == "density":
            model = build_density(**_parse_kv(body, {"a": int, "d": int}))
        elif head == "canonical":
            model = build_canonical(**_parse_kv(body, {"rho": float, "J": int}))
        elif head == "canonical-list":
            model = build_canonical_list([mp.mpf(c.strip()) for c in body.split(",")])
        elif head == "expof":
            model = build_exp_of(parse_model(body, validate=False))
        elif head == "expiter":
            model = build_exp_iter(**_parse_kv(body, {"k": int}))
        elif head == "explicit":
            with open(body, encoding="utf-8") as fh:
                coeffs = [line.strip() for line in fh if line.strip()]
            model = build_explicit(coeffs)
        else:
            raise ModelSpecError(f"unknown model kind {head!r}")
    except ValueError as exc:
        raise ModelSpecError(f"cannot parse model {text!r}: {exc}") from exc
    if validate:
        model.validate_class_k()
    return model
