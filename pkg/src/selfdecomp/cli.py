"""Command-line interface: ``selfdecomp {classify,verify,sample,catalog}``.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
Text reports start with ``# key: value`` header lines listing every
setting used, defaults included.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .bdlp import bdcf, bdcf_numeric, verify_decomposition
from .distributions import (
    CATALOG_NAMES,
    catalog_get,
    catalog_table,
    gamma_identity_check,
    product_cf,
)
from .errors import SelfDecompError
from .levy import DEFAULT_QUAD, char_function, iterated_residual
from .sampler import ecf_check, sample, thread_count, write_ecf_csv, write_samples_csv
from .urbanik import DEFAULT_GRID, NegativeAt, ScanGrid, classify, d_operator, sign_scan

GRID_FLAGS = ("--t", "--grid", "--ecf")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class GridSpec:
    """``min:max:points[,log]``; parsing the printed form gives the same grid."""

    lo: float
    hi: float
    points: int
    log: bool = False

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        body, _, flag = text.partition(",")
        if flag not in ("", "log"):
            raise UsageError(f"bad grid modifier {flag!r} in {text!r} (only 'log')")
        parts = body.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid {text!r} is not of the form min:max:points[,log]")
        try:
            lo, hi = float(parts[0]), float(parts[1])
            points = int(parts[2])
        except ValueError:
            raise UsageError(f"grid {text!r} has a non-numeric field") from None
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
            raise UsageError(f"grid {text!r} needs finite min < max")
        if points < 2:
            raise UsageError(f"grid {text!r} needs at least 2 points")
        if flag == "log" and lo <= 0:
            raise UsageError(f"log grid {text!r} needs min > 0")
        return cls(lo, hi, points, flag == "log")

    def __str__(self) -> str:
        return f"{self.lo!r}:{self.hi!r}:{self.points}" + (",log" if self.log else "")

    def values(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.lo, self.hi, self.points)
        return np.linspace(self.lo, self.hi, self.points)

    def scan_grid(self) -> ScanGrid:
        if self.lo <= 0:
            raise UsageError("scan grids live on x > 0")
        return ScanGrid(self.lo, self.hi, self.points, "logarithmic" if self.log else "linear",
                        DEFAULT_GRID.refine_iters)

    @classmethod
    def from_scan_grid(cls, g: ScanGrid) -> "GridSpec":
        return cls(g.x_min, g.x_max, g.points, g.scale == "logarithmic")


def _glue_negative(argv):
    # let "--t -5:5:101" through argparse, which would read -5:5:101 as a flag
    out, it = [], iter(argv)
    for tok in it:
        if tok in GRID_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _factors(text: str) -> tuple:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad factor list {text!r}") from None
    if not vals or not all(0.0 < v < 1.0 for v in vals):
        raise UsageError("factors must lie in (0, 1)")
    return vals


# ---------------------------------------------------------------------------
# output helpers


def _header(out, items):
    for key, value in items:
        out.write(f"# {key}: {value}\n")


def _fmt(v) -> str:
    return repr(float(v))


def _spec_from(args, c):
    params = {"alpha": args.alpha, "a": args.a, "c": c}
    return catalog_get(args.dist, **params)


def _params_text(spec) -> str:
    return ", ".join(f"{k}={v:g}" for k, v in spec.params.items()) or "none"


# ---------------------------------------------------------------------------
# classify


def cmd_classify(args, out) -> int:
    spec = _spec_from(args, args.c)
    grid = GridSpec.parse(args.grid).scan_grid() if args.grid else DEFAULT_GRID
    verdict = classify(spec.density, args.max_level, grid, DEFAULT_QUAD, name=spec.name)
    doc = verdict.to_dict()
    doc["params"] = dict(spec.params)
    if args.json:
        json.dump(doc, out, indent=2)
        out.write("\n")
        return 0
    _header(out, [
        ("command", "classify"),
        ("distribution", spec.name),
        ("params", _params_text(spec)),
        ("max_level", args.max_level),
        ("grid", GridSpec.from_scan_grid(grid)),
        ("refine_iters", grid.refine_iters),
        ("quad_rel_tol", DEFAULT_QUAD.rel_tol),
        ("quad_split_point", DEFAULT_QUAD.split_point),
    ])
    w = doc["witness"] or {}
    interval = w.get("interval") or ["", ""]
    mass = doc["mass_failures"][0] if doc["mass_failures"] else {}
    row = [spec.name, doc["achieved_level"], str(doc["bounded_above"]).lower(),
           w.get("level", ""), w.get("x", ""), w.get("value", ""), interval[0], interval[1],
           mass.get("level", ""), mass.get("mass", "")]
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["distribution", "achieved_level", "bounded_above", "witness_level",
                     "witness_x", "witness_value", "interval_lo", "interval_hi",
                     "mass_failure_level", "mass"])
    writer.writerow(row)
    return 0


# ---------------------------------------------------------------------------
# verify


@dataclass
class CheckTable:
    check: str
    t: np.ndarray
    deviation: np.ndarray
    tol: float
    extra: dict

    @property
    def max_deviation(self) -> float:
        return float(np.max(self.deviation)) if self.deviation.size else 0.0

    @property
    def passed(self) -> bool:
        ok = self.extra.get("nonnegative", True)
        return bool(self.max_deviation <= self.tol and ok)


def _check_cf(args, spec, t):
    closed = np.asarray(spec.cf_closed(t))
    dev = np.abs(char_function(spec.density, t) - closed)
    extra = {"routes": "levy_khintchine"}
    series = spec.series(args.K)
    if series is not None:
        dev = np.maximum(dev, np.abs(product_cf(series, t) - closed))
        extra["routes"] = "levy_khintchine,product"
    return dev, extra


def _check_bdcf(args, spec, t):
    numeric = bdcf_numeric(spec.cf_closed, t)
    if spec.bdcf_closed is not None:
        ref, route = bdcf(spec, t, "closed"), "closed_form"
    else:
        # exp of the Levy-Khintchine exponent of D k
        ref, route = char_function(d_operator(spec.density, 1), t), "d_operator_exponent"
    return np.abs(np.atleast_1d(numeric) - np.atleast_1d(ref)), {"reference": route}


def _check_decompose(args, spec, t):
    if args.c is None:
        raise UsageError("--check decompose needs --c")
    if not 0.0 < args.c < 1.0:
        raise UsageError("--c must lie in (0, 1)")
    dev = np.array([verify_decomposition(spec, args.c, [tv]) for tv in t])
    return dev, {"c": args.c}


def _residual_cf(phi, factors, t):
    val = np.ones_like(t)
    for m in range(len(factors) + 1):
        for sub in itertools.combinations(factors, m):
            val = val * np.asarray(phi(math.prod(sub) * t)) ** (-1) ** m
    return val


def _check_residual(args, spec, t):
    if not args.factors:
        raise UsageError("--check residual needs --factors")
    factors = _factors(args.factors)
    grid = GridSpec.parse(args.grid).scan_grid() if args.grid else DEFAULT_GRID
    res = iterated_residual(spec.density, factors)
    scan = sign_scan(res, grid)
    dev = np.abs(char_function(res, t) - _residual_cf(spec.cf_closed, factors, t))
    extra = {"factors": ",".join(f"{f:g}" for f in factors), "grid": str(GridSpec.from_scan_grid(grid)),
             "nonnegative": not isinstance(scan, NegativeAt)}
    if isinstance(scan, NegativeAt):
        extra["negative_at"] = scan.x
    else:
        extra["grid_min"] = scan.grid_min
    return dev, extra


def _check_gamma(args, spec, t):
    alpha = args.alpha if args.alpha is not None else 1.0
    rows = [gamma_identity_check(alpha, tv) for tv in t]
    return np.array([r.abs_diff for r in rows]), {"alpha": alpha}


_CHECKS = {
    "cf": _check_cf,
    "bdcf": _check_bdcf,
    "decompose": _check_decompose,
    "residual": _check_residual,
    "gamma-identity": _check_gamma,
}
_DEFAULT_T = {"cf": "-10:10:401", "bdcf": "-5:5:101", "decompose": "-5:5:101",
              "residual": "-10:10:41", "gamma-identity": "-5:5:101"}


def cmd_verify(args, out) -> int:
    if args.check == "gamma-identity":
        spec = None
    else:
        if args.dist is None:
            raise UsageError(f"--check {args.check} needs --dist")
        spec = _spec_from(args, args.dist_c)
    tgrid = GridSpec.parse(args.t or _DEFAULT_T[args.check])
    t = tgrid.values()
    dev, extra = _CHECKS[args.check](args, spec, t)
    table = CheckTable(args.check, t, np.asarray(dev, dtype=np.float64), args.tol, extra)
    if args.json:
        doc = {
            "check": args.check,
            "distribution": spec.name if spec else "generalized_logistic_identity",
            "t_grid": str(tgrid),
            "tol": args.tol,
            "max_deviation": table.max_deviation,
            "passed": table.passed,
            "details": {k: v for k, v in extra.items()},
            "points": [{"t": float(a), "deviation": float(b)} for a, b in zip(t, table.deviation)],
        }
        json.dump(doc, out, indent=2)
        out.write("\n")
        return 0 if table.passed else 1
    items = [("command", "verify"), ("check", args.check)]
    if spec is not None:
        items += [("distribution", spec.name), ("params", _params_text(spec))]
    items += [("t_grid", tgrid), ("tol", args.tol)]
    if args.check == "cf":
        items.append(("K", args.K))
    items += list(extra.items())
    _header(out, items)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", "deviation"])
    for a, b in zip(t, table.deviation):
        writer.writerow([_fmt(a), _fmt(b)])
    out.write(f"# max_deviation: {table.max_deviation!r}\n")
    out.write(f"# result: {'PASS' if table.passed else 'FAIL'}\n")
    return 0 if table.passed else 1


# ---------------------------------------------------------------------------
# sample


def cmd_sample(args, out) -> int:
    spec = _spec_from(args, args.c)
    if args.n < 1 or args.K < 1:
        raise UsageError("--n and --K must be positive")
    tgrid = GridSpec.parse(args.ecf) if args.ecf else None
    xs = sample(spec, args.n, args.seed, args.K, tail_correction=not args.no_tail_correction)
    report = ecf_check(xs, spec.cf_closed, tgrid.values()) if tgrid else None

    try:
        if args.out:
            with open(args.out, "w", newline="") as fh:
                write_samples_csv(fh, xs)
        else:
            write_samples_csv(out, xs)
    except OSError as exc:
        raise UsageError(f"cannot write samples: {exc}") from None

    if report is not None:
        # the report never shares a stream with the sample CSV
        target = sys.stderr if not args.out else out
        try:
            if args.ecf_out:
                with open(args.ecf_out, "w", newline="") as fh:
                    write_ecf_csv(fh, report)
                target = None
        except OSError as exc:
            raise UsageError(f"cannot write ECF report: {exc}") from None
        if target is not None:
            tail_mode = "none" if args.no_tail_correction else "gaussian_variance_match"
            _header(target, [
                ("command", "sample"), ("distribution", spec.name), ("params", _params_text(spec)),
                ("n", args.n), ("K", args.K), ("seed", args.seed), ("tail_correction", tail_mode),
                ("threads", thread_count()), ("ecf_grid", tgrid), ("band", report.band),
            ])
            write_ecf_csv(target, report)
            target.write(f"# violations: {report.violations} (allowed {report.allowed})\n")
            target.write(f"# result: {'PASS' if report.passed else 'FAIL'}\n")
        return 0 if report.passed else 1
    return 0


def cmd_catalog(args, out) -> int:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["name", "params", "cf", "class"])
    for row in catalog_table():
        writer.writerow([row["name"], " ".join(row["params"]), row["cf"], row["class"]])
    return 0


# ---------------------------------------------------------------------------


def _epilog() -> str:
    lines = ["catalog (name: Urbanik class):"]
    for row in catalog_table():
        lines.append(f"  {row['name']}: {row['class']}")
    lines.append("grids use min:max:points[,log]; exit codes 0 pass, 1 check failed, 2 usage error")
    return "\n".join(lines)


def _dist_args(p, required=True, c_flag="--c"):
    p.add_argument("--dist", required=required, choices=CATALOG_NAMES, metavar="NAME",
                   help="catalog distribution")
    p.add_argument("--alpha", type=float, help="logistic / generalized_logistic parameter")
    p.add_argument("--a", type=float, help="laplace scale")
    if c_flag:
        p.add_argument(c_flag, type=float, dest="c", help="talacko_zolotarev parameter")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    parser = argparse.ArgumentParser(prog="selfdecomp", description=__doc__.splitlines()[0],
                                     epilog=_epilog(), formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="Urbanik-class verdict", epilog=_epilog(), formatter_class=fmt)
    _dist_args(p)
    p.add_argument("--max-level", type=int, required=True)
    p.add_argument("--grid", help=f"scan grid (default {GridSpec.from_scan_grid(DEFAULT_GRID)})")
    fmt_group = p.add_mutually_exclusive_group()
    fmt_group.add_argument("--json", action="store_true")
    fmt_group.add_argument("--csv", action="store_true", help="header plus CSV row (default)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="numerical identity checks", epilog=_epilog(), formatter_class=fmt)
    p.add_argument("--check", required=True, choices=tuple(_CHECKS))
    _dist_args(p, required=False, c_flag=None)
    p.add_argument("--c", type=float, help="decomposition factor for --check decompose")
    p.add_argument("--dist-c", type=float, help="talacko_zolotarev parameter")
    p.add_argument("--factors", help="comma-separated residual factors in (0, 1)")
    p.add_argument("--t", help="t grid, e.g. -5:5:101")
    p.add_argument("--grid", help="x scan grid for --check residual")
    p.add_argument("--K", type=int, default=10_000, help="series truncation for --check cf")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="Monte Carlo draws as CSV", epilog=_epilog(), formatter_class=fmt)
    _dist_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--K", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-tail-correction", action="store_true")
    p.add_argument("--out", help="samples CSV (default stdout)")
    p.add_argument("--ecf", help="t grid for the empirical-cf band test")
    p.add_argument("--ecf-out", help="write the ECF report CSV here")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("catalog", help="list catalog entries")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Optional[list] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    argv = _glue_negative(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, SelfDecompError, ValueError) as exc:
        sys.stderr.write(f"selfdecomp: error: {exc}\n")
        return 2


def run(argv) -> tuple:
    """Call :func:`main` capturing stdout; returns (exit code, text)."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()
