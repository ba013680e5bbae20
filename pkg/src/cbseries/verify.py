"""Numerical verification of catalog entries.

Series are summed from exact rational terms.  Each term is rounded once to a
BigFloat with guard bits and accumulated in floating point.  At geometric
checkpoints N = 8, 16, 32, ... the partial sum plus its leading power-law tail
n t(n)/(alpha - 1) is recorded, and that sequence is extrapolated with the
Wynn epsilon algorithm.  A power-law tail fit over the last terms is computed
alongside as a cross-check and as the fallback when the epsilon estimates have
not settled within ``max_terms``.

Generating-function identities are checked pointwise: the truncated left side
is summed exactly at a rational x and only the final value is rounded.
"""

from __future__ import annotations

import json
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import mpmath
from gmpy2 import mpq
from mpmath.libmp import from_rational, fzero, mpf_add, mpf_mul, round_nearest

from .catalog import DEFAULT_REGISTRY, Entry, GFIdentity, Registry, SeriesIdentity
from .errors import DecayTooSlow, DomainError, NonConvergence, NumericOnlyRHS, ParamOutOfDomain
from .exact import RationalLike, rational
from .numerics import (
    digits_to_bits,
    eval_constvec,
    export,
    tail_fit,
    to_bigfloat,
    working_context,
    working_digits,
    wynn_epsilon,
)

DEFAULT_TOL = "1e-8"
DEFAULT_DIGITS = 60
DEFAULT_MAX_TERMS = 20000
DEFAULT_TRUNCATION = 500
FIRST_CHECKPOINT = 8
TAIL_WINDOW = 8
GUARD_BITS = 32

METHODS = ("epsilon-acceleration", "tail-corrected", "exact")
REPORT_FIELDS = (
    "id",
    "params",
    "method",
    "estimate",
    "reference",
    "abs_discrepancy",
    "terms_used",
    "digits",
    "verdict",
    "offset_note",
    "paper_ref",
)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one verification.

    ``params`` maps parameter names to ints; generating-function reports also
    carry the sample point under ``"x"`` as a ``"p/q"`` string.  ``converged``
    and ``detail`` are diagnostics kept out of the serialized schema.
    """

    id: str
    params: dict
    method: str
    estimate: mpmath.mpf
    reference: mpmath.mpf
    abs_discrepancy: mpmath.mpf
    terms_used: int
    digits: int
    verdict: str
    offset_note: Optional[str]
    paper_ref: str
    tolerance: mpmath.mpf = field(default=None, compare=False)
    converged: bool = True
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        def num(x):
            return mpmath.nstr(x, self.digits, min_fixed=-4, max_fixed=8) if x else "0"

        return {
            "id": self.id,
            "params": dict(self.params),
            "method": self.method,
            "estimate": num(self.estimate),
            "reference": num(self.reference),
            "abs_discrepancy": num(self.abs_discrepancy),
            "terms_used": self.terms_used,
            "digits": self.digits,
            "verdict": self.verdict,
            "offset_note": self.offset_note,
            "paper_ref": self.paper_ref,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _resolve(identity: str | Entry, registry: Registry | None) -> Entry:
    if isinstance(identity, (SeriesIdentity, GFIdentity)):
        return identity
    reg = DEFAULT_REGISTRY if registry is None else registry
    return reg[identity]


def _positive_tol(tol: RationalLike | mpmath.mpf) -> mpmath.mpf:
    t = to_bigfloat(tol, 30)
    if t <= 0:
        raise ValueError("tol must be positive")
    return t


def _checkpoints(max_terms: int) -> list[int]:
    out = []
    n = FIRST_CHECKPOINT
    while n <= max_terms:
        out.append(n)
        n *= 2
    if not out or out[-1] != max_terms:
        out.append(max_terms)
    return out


def _raw_term(q: mpq, prec: int):
    return from_rational(q.numerator, q.denominator, prec, round_nearest)


def _tail_corrected(s, t, n: int, alpha: int, prec: int) -> mpmath.mpf:
    """S_n + n t(n)/(alpha - 1): the partial sum with the leading power-law tail
    added, which removes the slowest error component before extrapolation."""
    if alpha <= 1 or n <= 0:
        return mpmath.mp.make_mpf(s)
    tail = mpf_mul(t, from_rational(n, alpha - 1, prec, round_nearest), prec, round_nearest)
    return mpmath.mp.make_mpf(mpf_add(s, tail, prec, round_nearest))


def _offset_note(entry, params, disc, tol, digits, prefactor=None) -> Optional[str]:
    """Flag a discrepancy that matches a single boundary term of the series."""
    if disc <= tol:
        return None
    candidates = [(entry.start_index, "first summed term")]
    if entry.lowest_defined() <= entry.start_index - 1:
        candidates.append((entry.start_index - 1, "term just below the start index"))
    with working_context(digits) as ctx:
        for n, label in candidates:
            q = entry.term(n, params) if prefactor is None else prefactor[0](n)
            value = abs(ctx.make_mpf(_raw_term(q, ctx.prec)))
            if prefactor is not None:
                value *= abs(prefactor[1])
            if abs(abs(disc) - value) < tol:
                return (
                    f"discrepancy equals the {label} |t({n})| = {ctx.nstr(value, 12)}; "
                    f"the start index is likely off by one"
                )
    return None


def verify_series(
    identity: str | SeriesIdentity,
    params: dict | None = None,
    tol: RationalLike | mpmath.mpf = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    digits: int = DEFAULT_DIGITS,
    registry: Registry | None = None,
) -> VerificationReport:
    """Sum a series entry numerically and compare it with its right-hand side.

    The verdict is "pass" when the accelerated estimate converged and lies
    within ``tol`` of the reference.  An estimate that never settled within
    ``max_terms`` terms yields a failing report whose ``detail`` names the
    NonConvergence.
    """
    entry = _resolve(identity, registry)
    if not isinstance(entry, SeriesIdentity):
        raise ParamOutOfDomain(f"{entry.id} is a generating-function identity; use verify_gf")
    p = entry.check_params(params)
    if max_terms < 100:
        raise ValueError("max_terms must be at least 100")
    tol_f = _positive_tol(tol)
    wd = max(int(digits), working_digits(tol_f))

    if entry.rhs is not None:
        reference = eval_constvec(entry.rhs(p), wd)
    elif entry.rhs_numeric is not None:
        reference = entry.rhs_numeric(p, wd)
    else:
        raise NumericOnlyRHS(f"{entry.id} has no right-hand side")

    prec = digits_to_bits(wd) + GUARD_BITS
    marks = _checkpoints(max_terms)
    sums: list = []
    corrected: list = []
    window: deque = deque(maxlen=TAIL_WINDOW)
    s = fzero
    n = entry.start_index
    estimates: list = []
    converged = False
    count = 0
    tol_step = tol_f / 10
    for mark in marks:
        while count < mark:
            t = _raw_term(entry.term(n, p), prec)
            s = mpf_add(s, t, prec, round_nearest)
            window.append(t)
            n += 1
            count += 1
        sums.append(mpmath.mp.make_mpf(s))
        corrected.append(_tail_corrected(s, t, n - 1, entry.decay_class, prec))
        if len(corrected) >= 5:
            estimates.append(wynn_epsilon(corrected, wd))
            if len(estimates) >= 2:
                with working_context(wd) as ctx:
                    step = abs(ctx.make_mpf(estimates[-1]._mpf_) - ctx.make_mpf(estimates[-2]._mpf_))
                if step <= tol_step:
                    converged = True
                    break

    partial = sums[-1]
    tail_note = ""
    tail_estimate = None
    tail_width = None
    try:
        # the window holds the last terms, t(n - w) .. t(n - 1), in index order
        last_index = n - 1
        if last_index >= len(window):
            fit = tail_fit([mpmath.mp.make_mpf(t) for t in window], last_index, wd)
            with working_context(wd) as ctx:
                tail_estimate = export(ctx.make_mpf(partial._mpf_) + ctx.make_mpf(fit.tail._mpf_))
            tail_width = fit.confidence_width
            tail_note = f"tail fit alpha={mpmath.nstr(fit.alpha, 6)} width={mpmath.nstr(fit.confidence_width, 3)}"
    except (DecayTooSlow, ValueError) as exc:
        tail_note = f"tail fit unavailable: {exc}"

    detail = tail_note
    if converged:
        method = "epsilon-acceleration"
        estimate = estimates[-1]
    elif tail_estimate is not None and tail_width <= tol_f:
        method = "tail-corrected"
        estimate = tail_estimate
        converged = True
    else:
        method = "epsilon-acceleration" if estimates else "tail-corrected"
        estimate = estimates[-1] if estimates else (tail_estimate if tail_estimate is not None else partial)
        err = NonConvergence(
            f"neither epsilon acceleration nor the tail fit reached tol within {count} terms"
        )
        detail = f"NonConvergence: {err}; {tail_note}"

    with working_context(wd) as ctx:
        disc = export(abs(ctx.make_mpf(estimate._mpf_) - ctx.make_mpf(reference._mpf_)))

    note = _offset_note(entry, p, disc, tol_f, wd)
    verdict = "pass" if converged and disc <= tol_f else "fail"
    return VerificationReport(
        id=entry.id,
        params=dict(p),
        method=method,
        estimate=estimate,
        reference=reference,
        abs_discrepancy=disc,
        terms_used=count,
        digits=wd,
        verdict=verdict,
        offset_note=note,
        paper_ref=entry.paper_ref,
        tolerance=tol_f,
        converged=converged,
        detail=detail,
    )


def _x_text(x: mpq) -> str:
    return f"{x.numerator}/{x.denominator}"


def verify_gf(
    identity: str | GFIdentity,
    x: RationalLike,
    truncation: int = DEFAULT_TRUNCATION,
    digits: int = DEFAULT_DIGITS,
    params: dict | None = None,
    registry: Registry | None = None,
) -> VerificationReport:
    """Check a generating-function identity at a rational point strictly inside its domain.

    The left side is the exact sum of ``truncation`` terms; the tolerance is
    the larger of the estimated truncation tail and 10^(5 - digits) relative
    to the reference.
    """
    entry = _resolve(identity, registry)
    if not isinstance(entry, GFIdentity):
        raise ParamOutOfDomain(f"{entry.id} is a series identity; use verify_series")
    p = entry.check_params(params)
    if truncation < 50:
        raise ValueError("truncation must be at least 50")
    xq = rational(x)
    if not entry.strictly_inside(xq):
        raise DomainError(f"x = {_x_text(xq)} is not strictly inside {entry.describe_domain()}")
    digits = int(digits)

    exact = mpq(0)
    last = prev = mpq(0)
    start = entry.start_index
    for n in range(start, start + truncation):
        prev, last = last, entry.lhs_term(n, xq, p)
        exact += last

    with working_context(digits + 10) as ctx:
        xf = ctx.make_mpf(_raw_term(xq, ctx.prec))
        factor = entry.prefactor(xf, ctx) if entry.prefactor is not None else ctx.one
        lhs = ctx.make_mpf(_raw_term(exact, ctx.prec)) * factor
        rhs = entry.rhs(xf, p, ctx)
        disc = abs(lhs - rhs)
        # geometric tail bound from the last term ratio
        if prev and last:
            ratio = abs(ctx.make_mpf(_raw_term(last / prev, ctx.prec)))
            tail = abs(ctx.make_mpf(_raw_term(last, ctx.prec)) * factor) * ratio / (1 - ratio) if ratio < 1 else ctx.inf
        else:
            tail = ctx.zero
        floor = ctx.mpf(10) ** (5 - digits) * max(ctx.one, abs(rhs))
        tol = max(tail, floor)
        estimate, reference, disc, tol, factor = export(lhs), export(rhs), export(disc), export(tol), export(factor)

    note = _offset_note(
        entry, p, disc, tol, digits + 10,
        prefactor=(lambda n: entry.lhs_term(n, xq, p), factor),
    )
    report_params = dict(p)
    report_params["x"] = _x_text(xq)
    return VerificationReport(
        id=entry.id,
        params=report_params,
        method="exact",
        estimate=estimate,
        reference=reference,
        abs_discrepancy=disc,
        terms_used=truncation,
        digits=digits,
        verdict="pass" if disc <= tol else "fail",
        offset_note=note,
        paper_ref=entry.paper_ref,
        tolerance=tol,
        converged=True,
        detail=f"tolerance {mpmath.nstr(tol, 3)}",
    )


# ------------------------------------------------------------------ sweeps


def _work_items(registry: Registry) -> list[tuple[str, dict, Optional[mpq]]]:
    from .catalog import default_sweep

    return [(e.id, p, x) for e, p, x in default_sweep(registry)]


def _failed_report(entry_id, params, x, digits, registry, exc) -> VerificationReport:
    reg = DEFAULT_REGISTRY if registry is None else registry
    report_params = dict(params)
    if x is not None:
        report_params["x"] = _x_text(x)
    nan = mpmath.mpf("nan")
    return VerificationReport(
        id=entry_id,
        params=report_params,
        method="exact" if x is not None else "epsilon-acceleration",
        estimate=nan,
        reference=nan,
        abs_discrepancy=nan,
        terms_used=0,
        digits=int(digits),
        verdict="fail",
        offset_note=None,
        paper_ref=reg[entry_id].paper_ref,
        converged=False,
        detail=f"{type(exc).__name__}: {exc}",
    )


def _run_item(item, tol, max_terms, digits, registry=None) -> VerificationReport:
    entry_id, params, x = item
    try:
        if x is None:
            return verify_series(entry_id, params, tol, max_terms, digits, registry)
        return verify_gf(entry_id, x, DEFAULT_TRUNCATION, digits, params, registry)
    except (ArithmeticError, ValueError, TypeError, KeyError) as exc:
        # one broken entry must not abort the batch
        return _failed_report(entry_id, params, x, digits, registry, exc)


def _run_default(args) -> VerificationReport:
    item, tol, max_terms, digits = args
    return _run_item(item, tol, max_terms, digits)


def verify_all(
    tol: RationalLike | mpmath.mpf = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    jobs: int | None = 1,
    registry: Registry | None = None,
    digits: int = DEFAULT_DIGITS,
) -> list[VerificationReport]:
    """Verify every entry over its default sweep, ordered by id then params.

    ``jobs > 1`` spreads the work over processes; entries are looked up by id
    in the workers, so this applies to the default registry only and custom
    registries always run serially.
    """
    _positive_tol(tol)
    if max_terms < 100:
        raise ValueError("max_terms must be at least 100")
    reg = DEFAULT_REGISTRY if registry is None else registry
    items = _work_items(reg)
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs > 1 and reg is DEFAULT_REGISTRY and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            args = [(it, tol, max_terms, digits) for it in items]
            return list(pool.map(_run_default, args, chunksize=1))
    return [_run_item(it, tol, max_terms, digits, reg) for it in items]
