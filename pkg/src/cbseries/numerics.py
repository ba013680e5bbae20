"""Arbitrary-precision floating-point evaluation.

BigFloat values are :class:`mpmath.mpf`.  Every routine takes its precision as
an explicit ``digits`` argument and computes inside a private mpmath context
borrowed from a per-thread pool, so the global ``mpmath.mp`` precision is never
read or modified.  Returned values are plain ``mpf`` objects; no rounding to
the global context happens on export.
"""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence, Union

import gmpy2
import mpmath
from mpmath.libmp import fone, from_rational, fzero, mpf_neg, mpf_pos, round_nearest

from .errors import DecayTooSlow, DomainError, NonConvergence, NumericalBreakdown
from .exact import ConstName, ConstVec

BigFloat = mpmath.mpf
Real = Union[int, str, Fraction, "gmpy2.mpq", "gmpy2.mpz", mpmath.mpf, ConstVec]

_MPQ = type(gmpy2.mpq())
_MPZ = type(gmpy2.mpz())
_local = threading.local()


@contextmanager
def working_context(digits: int) -> Iterator[mpmath.MPContext]:
    """Borrow a private mpmath context set to ``digits`` decimal digits.

    Contexts are pooled per thread, so nested borrowers (an integrand that
    itself calls :func:`elementary`, say) never share precision state.
    """
    pool = _local.__dict__.setdefault("pool", [])
    ctx = pool.pop() if pool else mpmath.MPContext()
    ctx.dps = digits
    try:
        yield ctx
    finally:
        pool.append(ctx)


def export(x) -> mpmath.mpf:
    """Detach a context-local mpf into a plain module-level mpf, bit for bit."""
    return mpmath.mp.make_mpf(x._mpf_)


def digits_to_bits(digits: int) -> int:
    return int(math.ceil(digits * 3.321928094887362)) + 4


def _rounded(x, digits: int) -> mpmath.mpf:
    return mpmath.mp.make_mpf(mpf_pos(x._mpf_, digits_to_bits(digits), round_nearest))


def _raw(x: Real, digits: int) -> tuple:
    """Raw mpf tuple for ``x``; exact inputs are correctly rounded at ``digits``."""
    if isinstance(x, float):
        raise TypeError("binary floats are not accepted; pass an exact value or mpf")
    if isinstance(x, ConstVec):
        return eval_constvec(x, digits)._mpf_
    if isinstance(x, str):
        x = Fraction(x.strip())
    if isinstance(x, (int, Fraction, _MPQ, _MPZ)):
        q = gmpy2.mpq(x)
        return from_rational(int(q.numerator), int(q.denominator), digits_to_bits(digits), round_nearest)
    if hasattr(x, "_mpf_"):
        return x._mpf_
    raise TypeError(f"cannot convert {type(x).__name__} to BigFloat")


def to_bigfloat(x: Real, digits: int) -> mpmath.mpf:
    """Convert an exact value (int, 'p/q', Fraction, mpq, ConstVec) or mpf to BigFloat."""
    return mpmath.mp.make_mpf(_raw(x, digits))


def _const_in(ctx: mpmath.MPContext, name: ConstName):
    if name is ConstName.ONE:
        return ctx.mpf(1)
    if name is ConstName.PI:
        return +ctx.pi
    if name is ConstName.PI_SQ:
        return ctx.pi ** 2
    if name is ConstName.LN2:
        return +ctx.ln2
    if name is ConstName.PI_LN2:
        return ctx.pi * ctx.ln2
    s2 = ctx.sqrt(2)
    if name is ConstName.SQRT2:
        return s2
    if name is ConstName.PI_SQRT2:
        return ctx.pi * s2
    l1p = ctx.ln(1 + s2)
    if name is ConstName.LN_1P_SQRT2:
        return l1p
    if name is ConstName.PI_LN_1P_SQRT2:
        return ctx.pi * l1p
    raise ValueError(name)


def eval_const(name: ConstName, digits: int) -> mpmath.mpf:
    """Value of a basis constant to ``digits`` significant digits.

    Product constants are formed from their factors at digits+10.
    """
    if digits < 10:
        raise ValueError("digits must be at least 10")
    if name is ConstName.ONE:
        return mpmath.mp.make_mpf(fone)
    with working_context(digits + 10) as ctx:
        return _rounded(_const_in(ctx, name), digits)


def eval_constvec(v: ConstVec, digits: int) -> mpmath.mpf:
    """Numerical value of ``v``, computed at digits+10 and rounded to digits."""
    if digits < 10:
        raise ValueError("digits must be at least 10")
    with working_context(digits + 10) as ctx:
        acc = ctx.zero
        for name, q in v:
            c = ctx.make_mpf(from_rational(int(q.numerator), int(q.denominator), ctx.prec, round_nearest))
            acc += c * _const_in(ctx, name)
        return _rounded(acc, digits)


ELEMENTARY = ("sqrt", "ln", "arcsin", "arctan", "sin", "cos")


def elementary(fn: str, x: Real, digits: int) -> mpmath.mpf:
    """Evaluate one of sqrt, ln, arcsin, arctan, sin, cos at ``x``.

    Raises DomainError outside the real domain of ``fn``.
    """
    if fn not in ELEMENTARY:
        raise ValueError(f"unknown elementary function {fn!r}; expected one of {ELEMENTARY}")
    with working_context(digits + 10) as ctx:
        xv = ctx.make_mpf(_raw(x, digits + 10))
        if fn == "sqrt":
            if xv < 0:
                raise DomainError(f"sqrt of negative value {ctx.nstr(xv, 8)}")
            out = ctx.sqrt(xv)
        elif fn == "ln":
            if xv <= 0:
                raise DomainError(f"ln of non-positive value {ctx.nstr(xv, 8)}")
            out = ctx.ln(xv)
        elif fn == "arcsin":
            if abs(xv) > 1:
                raise DomainError(f"arcsin argument {ctx.nstr(xv, 8)} outside [-1, 1]")
            out = ctx.asin(xv)
        elif fn == "arctan":
            out = ctx.atan(xv)
        elif fn == "sin":
            out = ctx.sin(xv)
        else:
            out = ctx.cos(xv)
        return _rounded(out, digits)


# ---------------------------------------------------------------- quadrature


@dataclass(frozen=True)
class QuadratureResult:
    value: mpmath.mpf
    error_estimate: mpmath.mpf
    levels_used: int


# (prec, level) -> list of (complement, weight) raw mpf tuples, where
# complement = 1 - |u| is the node's distance from the nearer end of [-1, 1].
# Level 0 holds t = 0, 1, 2, ...; level l > 0 holds the odd multiples of 2^-l.
_NODE_CACHE: dict[tuple[int, int], list[tuple[tuple, tuple]]] = {}
_NODE_LOCK = threading.Lock()


def _nodes(ctx: mpmath.MPContext, level: int) -> list[tuple[tuple, tuple]]:
    key = (ctx.prec, level)
    cached = _NODE_CACHE.get(key)
    if cached is not None:
        return cached
    h = ctx.ldexp(1, -level)
    eps = ctx.ldexp(1, -ctx.prec)
    half_pi = ctx.pi / 2
    out = []
    k = 0 if level == 0 else 1
    step = 1 if level == 0 else 2
    while True:
        t = k * h
        s = half_pi * ctx.sinh(t)
        # 1 - tanh(s) without cancellation
        comp = 2 / (ctx.exp(2 * s) + 1)
        if comp < eps:
            break
        ch = ctx.cosh(s)
        w = half_pi * ctx.cosh(t) / (ch * ch)
        out.append((comp._mpf_, w._mpf_))
        k += step
    with _NODE_LOCK:
        _NODE_CACHE[key] = out
    return out


def tanh_sinh_integrate(
    f: Callable,
    a: Real,
    b: Real,
    digits: int,
    max_level: int = 12,
) -> QuadratureResult:
    """Double-exponential quadrature of ``f`` over ``[a, b]``.

    ``f`` receives mpf arguments belonging to a private working context and
    should use that context's functions (``x.context.sqrt`` and so on) so it
    inherits the working precision.  Endpoints may be exact values, mpf or
    ConstVec (e.g. pi/2).  Nodes are evaluated at roughly twice the requested
    precision, so integrable algebraic endpoint singularities are harmless.

    >>> r = tanh_sinh_integrate(lambda t: 1 / t.context.sqrt(1 - t), 0, "1/2", 30)
    >>> mpmath.nstr(r.value, 20)
    '0.58578643762690495119'
    """
    if digits < 5:
        raise ValueError("digits must be at least 5")
    wp = 2 * digits + 10
    a_raw, b_raw = _raw(a, wp), _raw(b, wp)
    with working_context(wp) as ctx:
        av, bv = ctx.make_mpf(a_raw), ctx.make_mpf(b_raw)
        if av == bv:
            zero = mpmath.mp.make_mpf(fzero)
            return QuadratureResult(zero, zero, 0)
        if bv < av:
            res = tanh_sinh_integrate(f, b, a, digits, max_level)
            neg = mpmath.mp.make_mpf(mpf_neg(res.value._mpf_))
            return QuadratureResult(neg, res.error_estimate, res.levels_used)
        half = (bv - av) / 2
        mid = av + half
        target = ctx.mpf(10) ** (-digits)
        floor = ctx.mpf(10) ** (-2 * digits)

        def level_sum(level: int):
            acc = ctx.zero
            for comp_raw, w_raw in _nodes(ctx, level):
                comp = ctx.make_mpf(comp_raw)
                w = ctx.make_mpf(w_raw)
                if comp == 1:
                    acc += w * f(mid)
                else:
                    d = half * comp
                    acc += w * (f(av + d) + f(bv - d))
            return acc

        total = level_sum(0)
        prev = total * half
        diff = None
        for level in range(1, max_level + 1):
            total += level_sum(level)
            cur = total * ctx.ldexp(half, -level)
            diff = abs(cur - prev)
            if level >= 3 and diff <= target * max(abs(cur), floor):
                return QuadratureResult(export(cur), export(diff), level)
            prev = cur
        raise NonConvergence(
            f"tanh-sinh did not reach {digits} digits within {max_level} levels "
            f"(last difference {ctx.nstr(diff, 5)})"
        )


# ----------------------------------------------------- series acceleration


def wynn_epsilon(partial_sums: Sequence, digits: int = 50, strict: bool = False) -> mpmath.mpf:
    """Wynn epsilon extrapolation of a sequence of partial sums.

    Returns the last entry of the highest even column of the epsilon table.
    When a difference in the table falls below 10^-digits relative to the
    entries involved, the table is truncated there and the previous even
    column's value is returned (``strict=True`` raises NumericalBreakdown).

    >>> wynn_epsilon([1, 1, 1, 1, 1])
    mpf('1.0')
    """
    if len(partial_sums) < 5:
        raise ValueError("wynn_epsilon needs at least 5 partial sums")
    raws = [_raw(s, digits) for s in partial_sums]
    with working_context(digits) as ctx:
        col = [ctx.make_mpf(r) for r in raws]
        prev = [ctx.zero] * (len(col) + 1)
        rel = ctx.mpf(10) ** (-digits)
        best = col[-1]
        k = 0
        while len(col) > 1:
            nxt = []
            for i in range(len(col) - 1):
                delta = col[i + 1] - col[i]
                scale = max(abs(col[i]), abs(col[i + 1]))
                if not delta or abs(delta) <= rel * scale:
                    if strict:
                        raise NumericalBreakdown(f"epsilon table breakdown in column {k + 1}")
                    return export(best)
                nxt.append(prev[i + 1] + 1 / delta)
            prev, col = col, nxt
            k += 1
            if k % 2 == 0:
                best = col[-1]
        return export(best)


@dataclass(frozen=True)
class TailFit:
    alpha: mpmath.mpf
    tail: mpmath.mpf
    confidence_width: mpmath.mpf


def tail_fit(terms: Sequence, N: int, digits: int = 30) -> TailFit:
    """Fit t(n) ~ c n^-alpha over the window t(N-w+1..N) and estimate sum_{n>N} t(n).

    The exponent is the least-squares slope of log|t| against log n.  The
    tail is t(N) N/(alpha-1); its confidence width combines the worst log
    residual of the fit with the first neglected correction alpha/(2N).
    """
    w = len(terms)
    if w < 4:
        raise ValueError("tail_fit needs a window of at least 4 terms")
    if N < w:
        raise ValueError("window extends below n = 1")
    raws = [_raw(t, digits) for t in terms]
    with working_context(digits) as ctx:
        vals = [ctx.make_mpf(r) for r in raws]
        if any(not v for v in vals) or len({v > 0 for v in vals}) > 1:
            raise ValueError("tail_fit needs terms of one strict sign")
        xs = [ctx.ln(N - w + 1 + i) for i in range(w)]
        ys = [ctx.ln(abs(v)) for v in vals]
        mx = ctx.fsum(xs) / w
        my = ctx.fsum(ys) / w
        sxx = ctx.fsum((x - mx) ** 2 for x in xs)
        sxy = ctx.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
        slope = sxy / sxx
        alpha = -slope
        if alpha <= ctx.mpf("1.2"):
            raise DecayTooSlow(alpha)
        resid = max(abs(y - (my + slope * (x - mx))) for x, y in zip(xs, ys))
        tail = vals[-1] * N / (alpha - 1)
        width = abs(tail) * (resid + alpha / (2 * N))
        return TailFit(export(alpha), export(tail), export(width))


def working_digits(tol: Real) -> int:
    """Verification precision for a tolerance: max(50, 2 ceil(-log10 tol) + 20)."""
    with working_context(30) as ctx:
        t = ctx.make_mpf(_raw(tol, 30))
        if t <= 0:
            raise ValueError("tol must be positive")
        e = int(ctx.ceil(-ctx.log10(t) - ctx.mpf("1e-20")))
    return max(50, 2 * e + 20)
