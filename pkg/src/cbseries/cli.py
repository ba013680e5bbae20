"""Command-line interface.

Exit codes: 0 every check passed, 1 a verification failed, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath

from .catalog import DEFAULT_REGISTRY, GFIdentity, catalog_list
from .closed_forms import INTEGRALS
from .errors import CbseriesError, DomainError, NonConvergence, ParamOutOfDomain, UnknownIdentity
from .exact import rational
from .numerics import eval_constvec, tanh_sinh_integrate, to_bigfloat, working_context
from .verify import (
    DEFAULT_DIGITS,
    DEFAULT_MAX_TERMS,
    DEFAULT_TOL,
    DEFAULT_TRUNCATION,
    REPORT_FIELDS,
    VerificationReport,
    verify_all,
    verify_gf,
    verify_series,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FORMATS = ("json", "csv", "text")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    tol: str = DEFAULT_TOL
    digits: int = DEFAULT_DIGITS
    max_terms: int = DEFAULT_MAX_TERMS
    report_format: str = "text"
    output_path: Optional[str] = None
    parallelism: int = 1

    def validate(self) -> RunConfig:
        try:
            tol = to_bigfloat(rational(self.tol) if "/" in self.tol else self.tol, 30)
        except (TypeError, ValueError, ZeroDivisionError):
            raise UsageError(f"cannot parse tolerance {self.tol!r}") from None
        if tol <= 0:
            raise UsageError("tol must be positive")
        if self.digits < 20:
            raise UsageError("digits must be at least 20")
        if self.max_terms < 100:
            raise UsageError("max-terms must be at least 100")
        if self.report_format not in FORMATS:
            raise UsageError(f"format must be one of {', '.join(FORMATS)}")
        if self.parallelism < 1:
            raise UsageError("jobs must be at least 1")
        return self


def default_digits() -> int:
    env = os.environ.get("CBSERIES_DIGITS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"CBSERIES_DIGITS must be an integer, got {env!r}") from None
    return DEFAULT_DIGITS


def _config(args) -> RunConfig:
    digits = args.digits if args.digits is not None else default_digits()
    return RunConfig(
        tol=args.tol,
        digits=digits,
        max_terms=args.max_terms,
        report_format=args.format,
        output_path=args.out,
        parallelism=args.jobs if args.jobs is not None else (os.cpu_count() or 1),
    ).validate()


def _emit(text: str, config: RunConfig) -> None:
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------- rendering


def _params_text(params: dict) -> str:
    return ",".join(f"{k}={v}" for k, v in params.items()) or "-"


def render_reports(reports: Sequence[VerificationReport], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
        writer.writeheader()
        for r in reports:
            row = r.to_dict()
            row["params"] = json.dumps(row["params"], sort_keys=True)
            row["offset_note"] = row["offset_note"] or ""
            writer.writerow(row)
        return buf.getvalue()
    lines = []
    for r in reports:
        line = (
            f"{r.verdict.upper():4} {r.id} [{_params_text(r.params)}] {r.method} "
            f"|diff|={mpmath.nstr(r.abs_discrepancy, 3)} terms={r.terms_used}"
        )
        if r.offset_note:
            line += f"\n     note: {r.offset_note}"
        if r.verdict != "pass" and r.detail:
            line += f"\n     {r.detail}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def render_report_detail(r: VerificationReport) -> str:
    d = r.to_dict()
    d["params"] = json.dumps(d["params"])
    lines = [f"{key:16} {d[key] if d[key] is not None else '-'}" for key in REPORT_FIELDS]
    if r.detail:
        lines.append(f"{'detail':16} {r.detail}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------- commands


def cmd_list(args) -> int:
    config = _config(args)
    rows = [d for d in catalog_list() if not args.filter or args.filter in d.id]
    if config.report_format == "json":
        _emit(json.dumps([d.as_dict() for d in rows], indent=2) + "\n", config)
    elif config.report_format == "csv":
        buf = io.StringIO()
        fields = ["id", "kind", "domain", "paper_ref", "decay_class", "start_index", "erratum"]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for d in rows:
            writer.writerow(d.as_dict())
        _emit(buf.getvalue(), config)
    else:
        width = max((len(d.id) for d in rows), default=2)
        dom = max((len(d.domain) for d in rows), default=6)
        out = [f"{'id':{width}}  {'domain':{dom}}  {'decay':10}  citation"]
        for d in rows:
            mark = "  [erratum]" if d.erratum else ""
            out.append(f"{d.id:{width}}  {d.domain:{dom}}  {d.decay_class:10}  {d.paper_ref}{mark}")
        _emit("\n".join(out) + "\n", config)
    return EXIT_PASS


def _parse_params(pairs: Sequence[str]) -> dict:
    params = {}
    for pair in pairs or ():
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise UsageError(f"--param expects name=value, got {pair!r}")
        try:
            params[name.strip()] = int(value)
        except ValueError:
            raise UsageError(f"parameter {name} must be an integer, got {value!r}") from None
    return params


def cmd_verify(args) -> int:
    config = _config(args)
    params = _parse_params(args.param)
    entry = DEFAULT_REGISTRY[args.id]
    if isinstance(entry, GFIdentity):
        if args.x is None:
            raise UsageError(f"{args.id} is a generating-function identity; pass --x p/q")
        try:
            x = rational(args.x)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"cannot parse --x {args.x!r}; use p/q") from None
        report = verify_gf(entry, x, args.terms, config.digits, params)
    else:
        if args.x is not None:
            raise UsageError(f"{args.id} is a series identity; --x does not apply")
        report = verify_series(entry, params, config.tol, config.max_terms, config.digits)
    if config.report_format == "text":
        _emit(render_report_detail(report), config)
    else:
        _emit(render_reports([report], config.report_format), config)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_verify_all(args) -> int:
    config = _config(args)
    reports = verify_all(config.tol, config.max_terms, config.parallelism, digits=config.digits)
    _emit(render_reports(reports, config.report_format), config)
    failing = [r for r in reports if not r.passed]
    passed = len(reports) - len(failing)
    print(f"{passed}/{len(reports)} verifications passed", file=sys.stderr)
    if failing:
        names = ", ".join(f"{r.id}[{_params_text(r.params)}]" for r in failing)
        print(f"failing: {names}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_PASS


def cmd_integral(args) -> int:
    config = _config(args)
    family = INTEGRALS[args.name]
    given = {k: v for k, v in (("k", args.k), ("r", args.r), ("q", args.q)) if v is not None}
    if len(given) != 1:
        raise UsageError(f"integral {args.name} takes exactly one of --{family.param}")
    (flag, value), = given.items()
    if flag != family.param:
        raise UsageError(f"integral {args.name} is indexed by --{family.param}, not --{flag}")
    if value < family.minimum:
        raise UsageError(f"parameter out of domain ({family.param} ≥ {family.minimum})")
    exact = family.closed(value)
    digits = config.digits
    numeric = eval_constvec(exact, digits)
    quad = tanh_sinh_integrate(family.integrand(value), family.lower, family.upper, digits)
    with working_context(digits + 10) as ctx:
        diff = abs(ctx.make_mpf(numeric._mpf_) - ctx.make_mpf(quad.value._mpf_))
        scale = max(ctx.one, abs(ctx.make_mpf(numeric._mpf_)))
        agree = diff <= ctx.mpf(10) ** (10 - digits) * scale
        diff_text = ctx.nstr(diff, 6) if diff else "0"
    result = {
        "integral": family.name,
        "param": {family.param: value},
        "definition": family.description,
        "closed_form": str(exact),
        "value": mpmath.nstr(numeric, digits),
        "quadrature": mpmath.nstr(quad.value, digits),
        "abs_discrepancy": diff_text,
        "digits": digits,
        "verdict": "pass" if agree else "fail",
    }
    if config.report_format == "json":
        _emit(json.dumps(result, indent=2) + "\n", config)
    elif config.report_format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(result), lineterminator="\n")
        writer.writeheader()
        writer.writerow({**result, "param": json.dumps(result["param"])})
        _emit(buf.getvalue(), config)
    else:
        _emit("\n".join(f"{k:16} {v}" for k, v in result.items()) + "\n", config)
    return EXIT_PASS if agree else EXIT_FAIL


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", default=DEFAULT_TOL, help="absolute tolerance, decimal or p/q (default 1e-8)")
    common.add_argument("--digits", type=int, default=None,
                        help="working precision in digits (default 60, or $CBSERIES_DIGITS)")
    common.add_argument("--max-terms", type=int, default=DEFAULT_MAX_TERMS, help="series term budget")
    common.add_argument("--format", "--report", dest="format", choices=FORMATS, default="text")
    common.add_argument("--out", default=None, metavar="PATH", help="write the report to PATH")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for verify-all")

    parser = argparse.ArgumentParser(
        prog="cbseries",
        description="Verify series identities with central binomial coefficient ratios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", parents=[common], help="list registered identities")
    p.add_argument("--filter", default=None, help="substring of the ids to show")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("verify", parents=[common], help="verify one identity")
    p.add_argument("id")
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--x", default=None, metavar="P/Q", help="sample point for generating functions")
    p.add_argument("--terms", type=int, default=DEFAULT_TRUNCATION,
                   help="truncation for generating functions (default 500)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-all", parents=[common], help="run the default sweep")
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("integral", parents=[common], help="closed form of an integral with its quadrature check")
    p.add_argument("name", choices=list(INTEGRALS))
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.set_defaults(func=cmd_integral)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except UnknownIdentity as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (ParamOutOfDomain, DomainError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except CbseriesError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
