"""Batch command-line surface: CSV/JSON reports for every diagnostic.

Every subcommand produces a header + rows table.  JSON output wraps the
table in an object carrying ``schema_version: 1`` plus any run-level
metadata (verdicts, tail bounds).  Numbers are serialized as the shortest
decimal that round-trips, identically in both formats.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from .criteria import (
    asymptotic_constant_check,
    default_grid,
    diagnose,
    euler_bound_harness,
    zero_free_check,
)
from .errors import (
    BudgetExceededError,
    DomainError,
    GridError,
    KhinchinError,
    ModelSpecError,
    QuadratureError,
    TailTooHeavyError,
    UnsupportedModelError,
)
from .family import direct_moments, distribution, ks_distance_to_normal
from .fulcrum import cumulants_analytic, cumulants_from_distribution, has_analytic_route
from .models import parse_model

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3

_VALIDATION_ERRORS = (DomainError, ModelSpecError, GridError, UnsupportedModelError)
_BUDGET_ERRORS = (BudgetExceededError, TailTooHeavyError, QuadratureError)


def _fmt(x):
    """Shortest round-trip decimal for numbers; strings pass through."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, str):
        return x
    return repr(float(x))


class Report:
    def __init__(self, command, header, rows, meta=None):
        self.command = command
        self.header = header
        self.rows = rows
        self.meta = meta or {}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        obj = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            **self.meta,
            "header": self.header,
            "rows": [
                {name: _coerce(v) for name, v in zip(self.header, row)}
                for row in self.rows
            ],
        }
        return json.dumps(obj, indent=2) + "\n"


def _coerce(v):
    if isinstance(v, (bool, int, str)):
        return v
    return float(v)


def _parse_values(text: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise DomainError(f"bad numeric list {text!r}") from exc


def _resolve_grid(args, model):
    if getattr(args, "t_grid", None):
        if args.t_grid == "default":
            return default_grid(model)
        return _parse_values(args.t_grid)
    if getattr(args, "t", None) is not None:
        return [args.t]
    return default_grid(model)


def _map_grid(fn, grid, jobs):
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, grid))
    return [fn(t) for t in grid]


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _cmd_family(args) -> Report:
    model = parse_model(args.model)
    if args.t is None:
        raise DomainError("family requires --t")
    slc = distribution(model, args.t, args.tail_tol)
    rows = [[n, p] for n, p in enumerate(slc.probs)]
    meta = {
        "t": args.t,
        "tail_mass_bound": slc.tail_mass_bound,
        "mean": slc.mean_hint,
        "sigma": slc.sigma_hint,
    }
    return Report("family", ["n", "prob"], rows, meta)


def _cmd_moments(args) -> Report:
    model = parse_model(args.model)
    grid = _resolve_grid(args, model)
    order = args.order

    def one(t):
        slc = distribution(model, t, args.tail_tol)
        rep = direct_moments(slc, order)
        return [t, rep.mean, rep.variance] + list(rep.normalized)

    rows = _map_grid(one, grid, args.jobs)
    header = ["t", "mean", "variance"] + [f"nu{k}" for k in range(3, order + 1)]
    return Report("moments", header, rows, {"order": order})


def _cmd_cumulants(args) -> Report:
    model = parse_model(args.model)
    grid = _resolve_grid(args, model)
    K = args.kmax
    route = args.route
    if route == "auto":
        route = "analytic" if has_analytic_route(model) else "distribution"
    if route == "analytic" and not has_analytic_route(model):
        raise DomainError(f"model {args.model!r} has no analytic route")

    def one(t):
        if route == "analytic":
            cv = cumulants_analytic(model, t, K, args.rel_tol)
        else:
            cv = cumulants_from_distribution(model, t, K, args.tail_tol)
        return [t, cv.route] + list(cv.kappas)

    rows = _map_grid(one, grid, args.jobs)
    header = ["t", "route"] + [f"kappa{k}" for k in range(1, K + 1)]
    return Report("cumulants", header, rows)


def _cmd_criteria(args) -> Report:
    model = parse_model(args.model)
    grid = _resolve_grid(args, model)
    diag = diagnose(model, grid, args.kmax, route_preference=args.route)
    ks = range(3, diag.kmax + 1)
    rows = []
    for i, t in enumerate(diag.t_grid):
        rows.append([t] + [diag.values[k][i] for k in ks] + [diag.verdict])
    header = ["t"] + [f"q{k}" for k in ks] + ["verdict"]
    meta = {
        "verdict": diag.verdict,
        "classifications": {str(k): diag.classifications[k] for k in ks},
        "thresholds": diag.thresholds,
    }
    return Report("criteria", header, rows, meta)


def _cmd_asymptotics(args) -> Report:
    model = parse_model(args.model)
    s_grid = _parse_values(args.s) if args.s else [0.1, 0.05, 0.02, 0.01]
    report = asymptotic_constant_check(model, args.m, s_grid)
    rows = [[r.s, r.value, r.constant, r.ratio] for r in report.records]
    meta = {
        "m": report.m,
        "alpha": report.alpha,
        "constant": report.constant,
        "monotone_last_half": report.monotone_last_half,
        "final_error": report.final_error,
    }
    return Report("asymptotics", ["s", "value", "constant", "ratio"], rows, meta)


def _cmd_ks(args) -> Report:
    model = parse_model(args.model)
    grid = _resolve_grid(args, model)

    def one(t):
        slc = distribution(model, t, args.tail_tol)
        return [t, ks_distance_to_normal(slc)]

    rows = _map_grid(one, grid, args.jobs)
    return Report("ks", ["t", "ks_distance"], rows)


def _cmd_zerofree(args) -> Report:
    model = parse_model(args.model)
    grid = _resolve_grid(args, model)

    def one(t):
        rep = zero_free_check(model, t, args.samples)
        return [t, rep.sigma, rep.theta_max, rep.min_modulus, rep.samples]

    rows = _map_grid(one, grid, args.jobs)
    header = ["t", "sigma", "theta_max", "min_modulus", "samples"]
    return Report("zerofree", header, rows)


def _cmd_euler(args) -> Report:
    s_grid = _parse_values(args.s) if args.s else [1.0, 0.5, 0.1, 0.01]
    records = euler_bound_harness(args.m, args.p, args.k, s_grid)
    rows = [[r.m, r.p, r.k, r.s, r.lhs, r.bound_s, r.bound_x, r.holds]
            for r in records]
    header = ["m", "p", "k", "s", "lhs", "bound_s", "bound_x", "holds"]
    return Report("euler", header, rows)


_COMMANDS = {
    "family": _cmd_family,
    "moments": _cmd_moments,
    "cumulants": _cmd_cumulants,
    "criteria": _cmd_criteria,
    "asymptotics": _cmd_asymptotics,
    "ks": _cmd_ks,
    "zerofree": _cmd_zerofree,
    "euler": _cmd_euler,
}


def _render_plot(report: Report, path: str) -> None:
    """Line plot of the numeric columns against the first column."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [float(row[0]) for row in report.rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for j, name in enumerate(report.header[1:], start=1):
        try:
            ys = [abs(float(row[j])) for row in report.rows]
        except (TypeError, ValueError):
            continue
        ax.plot(xs, ys, marker="o", markersize=3, label=name)
    ax.set_xlabel(report.header[0])
    if all(x > 0 for x in xs) and xs and max(xs) / max(min(xs), 1e-300) > 50:
        ax.set_xscale("log")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    ax.set_title(report.command)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="khinchin",
        description="Khinchin-family diagnostics for power series models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True, grid=True):
        if model:
            p.add_argument("--model", required=True, help="model spec string")
        if grid:
            p.add_argument("--t", type=float, help="single parameter value")
            p.add_argument("--t-grid", dest="t_grid",
                           help="comma list of t values, or 'default'")
            p.add_argument("--jobs", type=int, default=1,
                           help="grid parallelism degree")
        p.add_argument("--tail-tol", dest="tail_tol", type=float, default=1e-12)
        p.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-12)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--plot", action="store_true",
                       help="also render a PNG figure next to the output")

    p = sub.add_parser("family", help="distribution slice table")
    common(p)

    p = sub.add_parser("moments", help="moment report per t")
    common(p)
    p.add_argument("--order", type=int, default=6)

    p = sub.add_parser("cumulants", help="cumulant vectors per t")
    common(p)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--route", choices=("auto", "analytic", "distribution"),
                   default="auto")

    p = sub.add_parser("criteria", help="quotient diagnostics with verdict")
    common(p)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--route", choices=("auto", "analytic", "distribution"),
                   default="auto")

    p = sub.add_parser("asymptotics", help="ratio-to-constant table")
    common(p, grid=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--s", help="comma list of s values (decreasing)")

    p = sub.add_parser("ks", help="KS distance to normal per t")
    common(p)

    p = sub.add_parser("zerofree", help="minimum modulus on the safe arc")
    common(p)
    p.add_argument("--samples", type=int, default=128)

    p = sub.add_parser("euler", help="Euler-summation inequality table")
    common(p, model=False, grid=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", help="comma list of s values")

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else EXIT_OK
    try:
        report = _COMMANDS[args.command](args)
    except _VALIDATION_ERRORS as exc:
        _emit_error(exc)
        return EXIT_VALIDATION
    except _BUDGET_ERRORS as exc:
        _emit_error(exc)
        return EXIT_BUDGET
    text = report.to_json() if args.format == "json" else report.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if getattr(args, "plot", False):
        base = args.out if args.out else f"{args.command}"
        png = base.rsplit(".", 1)[0] + ".png" if "." in base else base + ".png"
        _render_plot(report, png)
    return EXIT_OK


def _emit_error(exc: KhinchinError) -> None:
    sys.stderr.write(json.dumps(
        {"error_code": exc.error_code, "message": str(exc)}) + "\n")


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
