"""Registry of verifiable identities.

Two kinds of entries live here:

* :class:`SeriesIdentity` - an infinite series with exact rational terms and an
  exact ConstVec right-hand side (or, for one entry, a numeric-only value);
* :class:`GFIdentity` - a generating-function identity checked pointwise at
  rational sample points.

Each entry transcribes its term and right-hand side next to a citation.  Entries
whose printed form needed correcting carry an ``erratum`` note explaining how
the registered form differs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

import mpmath
from gmpy2 import mpq

from .closed_forms import closed_B, closed_F, closed_I, closed_K, closed_phi_odd, closed_wp
from .errors import NumericOnlyRHS, ParamOutOfDomain, UnknownIdentity
from .numerics import export, working_context
from .exact import (
    LN2,
    LN_1P_SQRT2,
    ONE,
    PI_SQ,
    SQRT2,
    ConstVec,
    binomial as C,
    central_binomial,
    factorial,
    pochhammer,
    pow2,
)

Params = Mapping[str, int]


@dataclass(frozen=True)
class Param:
    """A named integer parameter: ``value >= minimum``, optionally restricted to ``values``."""

    name: str
    minimum: int = 0
    values: Optional[tuple[int, ...]] = None

    def describe(self) -> str:
        if self.values is not None:
            return f"{self.name} ∈ {{{', '.join(map(str, self.values))}}}"
        return f"{self.name} ≥ {self.minimum}"

    def admits(self, value: int) -> bool:
        if self.values is not None:
            return value in self.values
        return value >= self.minimum


def _check_params(entry_id: str, spec: tuple[Param, ...], params: Params | None) -> dict[str, int]:
    params = dict(params or {})
    names = {p.name for p in spec}
    extra = sorted(set(params) - names)
    if extra:
        raise ParamOutOfDomain(f"unknown parameter {extra[0]!r} for {entry_id}")
    out = {}
    for p in spec:
        if p.name not in params:
            raise ParamOutOfDomain(f"missing parameter {p.name} ({p.describe()})")
        v = params[p.name]
        if isinstance(v, bool) or not isinstance(v, int):
            try:
                v = int(v)
            except (TypeError, ValueError):
                raise ParamOutOfDomain(f"parameter {p.name} must be an integer") from None
        if not p.admits(v):
            raise ParamOutOfDomain(f"parameter out of domain ({p.describe()})")
        out[p.name] = v
    return out


@dataclass(frozen=True)
class SeriesIdentity:
    """sum_{n >= start_index} term(n, params) = rhs(params)."""

    id: str
    params: tuple[Param, ...]
    start_index: int
    term: Callable[[int, Params], mpq]
    rhs: Optional[Callable[[Params], ConstVec]]
    decay_class: int
    paper_ref: str
    sweep: tuple[dict, ...] = ()
    rhs_numeric: Optional[Callable[[Params, int], mpmath.mpf]] = None
    first_defined: Optional[int] = None
    erratum: str = ""
    parent: Optional[str] = None
    kind: str = field(default="series", init=False)

    def check_params(self, params: Params | None) -> dict[str, int]:
        return _check_params(self.id, self.params, params)

    def domain(self) -> str:
        return ", ".join(p.describe() for p in self.params) or "-"

    def lowest_defined(self) -> int:
        return self.start_index if self.first_defined is None else self.first_defined


@dataclass(frozen=True)
class GFIdentity:
    """sum_{n >= start_index} lhs_term(n, x, params) * prefactor(x) = rhs(x, params).

    ``rhs`` and ``prefactor`` receive an mpf ``x`` from a working context and
    that context; ``lhs_term`` is exact for rational ``x``.  ``domain`` is a
    closed or half-open interval given as (lower, upper, lower_closed,
    upper_closed); points in ``excluded`` are outside the domain too.
    """

    id: str
    params: tuple[Param, ...]
    start_index: int
    lhs_term: Callable[[int, mpq, Params], mpq]
    rhs: Callable
    domain: tuple[mpq, mpq, bool, bool]
    paper_ref: str
    samples: tuple[tuple[dict, mpq], ...] = ()
    excluded: tuple[mpq, ...] = ()
    prefactor: Optional[Callable] = None
    first_defined: Optional[int] = None
    erratum: str = ""
    decay_class: str = "geometric"
    kind: str = field(default="gf", init=False)

    def check_params(self, params: Params | None) -> dict[str, int]:
        return _check_params(self.id, self.params, params)

    def describe_domain(self) -> str:
        lo, hi, lc, uc = self.domain
        text = f"x ∈ {'[' if lc else '('}{lo}, {hi}{']' if uc else ')'}"
        for e in self.excluded:
            text += f", x ≠ {e}"
        return text

    def domain_text(self) -> str:
        parts = [p.describe() for p in self.params]
        parts.append(self.describe_domain())
        return ", ".join(parts)

    def lowest_defined(self) -> int:
        return self.start_index if self.first_defined is None else self.first_defined

    def strictly_inside(self, x: mpq) -> bool:
        lo, hi, _, _ = self.domain
        return lo < x < hi and x not in self.excluded


Entry = SeriesIdentity | GFIdentity


class Registry:
    """Immutable id -> entry mapping preserving registration order."""

    def __init__(self, entries: Iterable[Entry] = ()):
        items: dict[str, Entry] = {}
        for e in entries:
            if e.id in items:
                raise ValueError(f"duplicate identity id {e.id!r}")
            items[e.id] = e
        self._items = items

    def __getitem__(self, entry_id: str) -> Entry:
        try:
            return self._items[entry_id]
        except KeyError:
            raise UnknownIdentity(entry_id) from None

    def __contains__(self, entry_id: object) -> bool:
        return entry_id in self._items

    def __iter__(self):
        return iter(self._items.values())

    def __len__(self) -> int:
        return len(self._items)

    def ids(self) -> list[str]:
        return list(self._items)

    def replace(self, entry: Entry) -> Registry:
        """Copy of this registry with ``entry`` substituted (or appended)."""
        items = dict(self._items)
        items[entry.id] = entry
        return Registry(items.values())


# ------------------------------------------------------------------ helpers


def Q(num, den=1) -> mpq:
    return mpq(num, den)


def _sqrt2_times(v: ConstVec) -> ConstVec:
    return v.times_sqrt2()


def _b_sum(top: int, upper: int, exp_offset: int, r: int) -> ConstVec:
    """sum_{k=0}^{upper} (-1)^k / ((2k+1) 2^(2r-k+exp_offset)) C(top, k) B(k)."""
    acc = ConstVec()
    for k in range(upper + 1):
        acc = acc + closed_B(k) * (Q((-1) ** k * C(top, k), 2 * k + 1) * pow2(-(2 * r - k + exp_offset)))
    return acc


def _vec(one=0, sqrt2=0, pi_sq=0, ln2=0, ln1p=0) -> ConstVec:
    return ONE * Q(one) + SQRT2 * Q(sqrt2) + PI_SQ * Q(pi_sq) + LN2 * Q(ln2) + LN_1P_SQRT2 * Q(ln1p)


def _literal(table: dict[int, ConstVec], key: str = "r") -> Callable[[Params], ConstVec]:
    return lambda p: table[p[key]]


# --------------------------------------------------------- series: terms


def t_bhandari_1(n, p):
    return Q(4**n * C(2 * n, n), (2 * n - 1) ** 2 * C(4 * n, 2 * n))


def t_bhandari_3(n, p):
    return Q(C(2 * n, n) * C(4 * n, 2 * n), (n + 1) * 64**n)


def t_214(n, p):
    r = p["r"]
    return Q(n * 4**n * C(2 * n, n), (2 * n - 1) ** 2 * (4 * n + 2 * r - 1) * C(4 * n + 2 * r - 2, 2 * n + r - 1))


def t_215(n, p):
    r = p["r"]
    return Q(
        n * 4**n * C(2 * n, n),
        (2 * n - 1) ** 2 * (2 * n + 1) * (4 * n + 2 * r + 1) * C(4 * n + 2 * r, 2 * n + r),
    )


def t_216(n, p):
    r = p["r"]
    return Q(n * 4**n * C(2 * n, n), (4 * n * n - 1) * (4 * n + 2 * r + 1) * C(4 * n + 2 * r, 2 * n + r))


def t_kunle1(n, p):
    r = p["r"]
    return Q(C(4 * n, 2 * n), (2 * n + 1) * (2 * n + 2 * r + 1) * 4**n * C(2 * n + 2 * r, n + r))


def t_kunle2(n, p):
    r = p["r"]
    return Q(C(4 * n - 2, 2 * n - 1), n * (2 * n + 2 * r - 1) * 4**n * C(2 * n + 2 * r - 2, n + r - 1))


def t_501(n, p):
    m, r = p["m"], p["r"]
    s = m + r
    return Q(C(2 * n, n), (n + m + 1) * (2 * n + 2 * s + 1) * C(2 * n + 2 * s, n + s))


def t_coro1(n, p):
    return t_501(n, {"m": 0, "r": p["r"]})


def t_502(n, p):
    r = p["r"]
    return Q(
        n * C(2 * n, n),
        (2 * n + 2 * r + 3) * (2 * n - 1) ** 2 * (2 * n + 1) * (2 * n + 3) * C(2 * n + 2 * r + 2, n + r + 1),
    )


def t_503(n, p):
    r = p["r"]
    return Q(n * n * C(2 * n, n), (2 * n + 2 * r + 1) * (2 * n - 1) ** 2 * (2 * n + 1) * C(2 * n + 2 * r, n + r))


def t_504(n, p):
    r = p["r"]
    return Q(
        C(2 * n, n),
        (2 * n + 2 * r + 3) * (n + 1) * (2 * n + 1) * (2 * n + 3) * C(2 * n + 2 * r + 2, n + r + 1),
    )


def t_505(n, p):
    r = p["r"]
    return Q(C(2 * n, n), (n + 1) * (2 * n + 3) * (2 * n + 2 * r + 3) * C(2 * n + 2 * r + 2, n + r + 1))


def t_502_pochhammer(n, p):
    r = p["r"]
    base = Q(n, (2 * n + 2 * r + 3) * (2 * n - 1) ** 2 * (2 * n + 1) * (2 * n + 3))
    return base * pochhammer(n + 1, r + 1) / pochhammer(Q(2 * n + 1, 2), r + 1)


def t_sec6(n, p):
    r = p["r"]
    # 1/(n (n + 3/2)) = 2/(n (2n + 3))
    return Q(2 * C(4 * n + 2 * r, 2 * n + r), 4**n * n * (2 * n + 3) * C(2 * n, n))


# ----------------------------------------------------------- series: rhs


def rhs_214(p):
    r = p["r"]
    return _sqrt2_times(_b_sum(r, r, -1, r))


def rhs_215(p):
    r = p["r"]
    first = _sqrt2_times(_b_sum(r + 1, r + 1, 1, r)) * Q(1, 2)
    middle = closed_phi_odd(r) * pow2(-(2 * r + 3))
    # 1/2^(3/2) = sqrt2/4
    last = _sqrt2_times(_b_sum(r - 1, r - 1, 1, r)) * Q(1, 4)
    return first + middle - last


def rhs_216(p):
    r = p["r"]
    return _sqrt2_times(_b_sum(r - 1, r - 1, 1, r)) * Q(1, 2) - closed_phi_odd(r) * pow2(-(2 * r + 2))


def rhs_kunle1(p):
    r = p["r"]
    return closed_K(r) * pow2(1 - 2 * r) - ONE * Q(1, (2 * r + 1) * central_binomial(r))


def rhs_kunle2(p):
    r = p["r"]
    return ONE * Q(1, (2 * r - 1) * central_binomial(r - 1)) - closed_I(r) * pow2(2 - 2 * r)


def rhs_501(p):
    m, r = p["m"], p["r"]
    lead = Q(1, 2 * (2 * m + 1) * central_binomial(m) * (2 * r - 1) * central_binomial(r - 1))
    s = sum(
        (Q((-1) ** k * C(m, k) * factorial(k), 2 * k + 1) / pochhammer(r, k + 1) for k in range(m + 1)),
        Q(0),
    )
    return ONE * (lead - s * Q(1, 4 ** (m + r)))


def rhs_coro1(p):
    r = p["r"]
    return ONE * (Q(1, 2 * (2 * r - 1) * central_binomial(r - 1)) - Q(1, 4**r * r))


def rhs_502_inner(r: int) -> ConstVec:
    wp = closed_wp
    return (
        (wp(2 * r + 4) * 8 - wp(2 * r + 2) * 8 + wp(2 * r) * 3) * Q(1, 128)
        + ONE * (Q(6, 128 * (4 + 2 * r)) - Q(3, 128 * (2 + 2 * r)))
    )


def rhs_502(p):
    r = p["r"]
    return rhs_502_inner(r) * pow2(-(2 * r + 2))


def rhs_502_pochhammer(p):
    return rhs_502_inner(p["r"])


def rhs_503(p):
    r = p["r"]
    inner = (closed_wp(2 * r + 2) * 2 + closed_wp(2 * r)) * Q(1, 8) - ONE * Q(1, 16 * (r + 1))
    return inner * pow2(-(2 * r + 1))


def rhs_504(p):
    r = p["r"]
    inner = ONE * Q(3, 8 * (r + 1)) + (closed_wp(2 * r + 2) * 4 + closed_wp(2 * r) * 2) * Q(1, 8)
    return (
        inner * pow2(-(2 * r + 1))
        - ONE * Q(1, 3 * (2 * r + 3) * central_binomial(r + 1))
        - ONE * Q(1, 2 * (2 * r + 1) * central_binomial(r))
    )


def rhs_505(p):
    r = p["r"]
    s = sum((Q(4**k, k * k * central_binomial(k)) for k in range(1, r + 1)), Q(0))
    bracket = (PI_SQ * Q(1, 2) + ONE * s) * Q(central_binomial(r), 2 * 4 ** (r + 1))
    inner = ONE * Q(1, 4 * (r + 1)) + bracket
    return (
        ONE * Q(1, 2 * (2 * r + 1) * central_binomial(r))
        - ONE * Q(1, 3 * (2 * r + 3) * central_binomial(r + 1))
        - inner * pow2(-(2 * r + 1))
    )


def rhs_sec6(p):
    r = p["r"]
    four = 4 ** (r + 1)
    return (
        ONE * (Q(4, 9) * central_binomial(r) + Q(128, 3) * central_binomial(r - 2))
        - closed_F(r - 1).over_pi() * Q(four, 3)
        - closed_F(r - 3).over_pi() * Q(2 * four, 3)
    )


def rhs_bhandari_3_numeric(p, digits):
    with working_context(digits + 10) as ctx:
        return export(8 * ctx.sqrt(2) / (3 * ctx.pi))


# --------------------------------------------------------- series: table


def _r(*values):
    return tuple({"r": v} for v in values)


R0 = (Param("r", 0),)
R1 = (Param("r", 1),)
R3 = (Param("r", 3),)


def _example(parent: SeriesIdentity, values: dict[int, ConstVec], ref: str, erratum: str = "") -> SeriesIdentity:
    keys = tuple(sorted(values))
    return SeriesIdentity(
        id=parent.id + ("-corollary" if "Corollary" in ref else "-example"),
        params=(Param("r", min(keys), keys),),
        start_index=parent.start_index,
        term=parent.term,
        rhs=_literal(values),
        decay_class=parent.decay_class,
        paper_ref=ref,
        sweep=_r(*keys),
        first_defined=parent.first_defined,
        erratum=erratum,
        parent=parent.id,
    )


def _fixed(entry_id, term, params, start, rhs, decay, ref, parent=None, erratum="", first_defined=None,
           rhs_numeric=None) -> SeriesIdentity:
    bound = dict(params)
    return SeriesIdentity(
        id=entry_id,
        params=(),
        start_index=start,
        term=lambda n, p: term(n, bound),
        rhs=None if rhs is None else (lambda p: rhs),
        decay_class=decay,
        paper_ref=ref,
        sweep=({},),
        rhs_numeric=rhs_numeric,
        first_defined=first_defined,
        erratum=erratum,
        parent=parent,
    )


THM_214 = SeriesIdentity("thm-2.1.4", R1, 1, t_214, rhs_214, 2, "Theorem 2.1.4", _r(1, 2, 3, 4))
THM_215 = SeriesIdentity("thm-2.1.5", R1, 1, t_215, rhs_215, 3, "Theorem 2.1.5", _r(1, 2, 3, 4))
THM_216 = SeriesIdentity("thm-2.1.6", R1, 1, t_216, rhs_216, 2, "Theorem 2.1.6", _r(1, 2, 3, 4))
KUNLE1 = SeriesIdentity("thm-kunle1", R0, 1, t_kunle1, rhs_kunle1, 2, "Theorem (kunle1)", _r(0, 1, 2, 3, 4))
KUNLE2 = SeriesIdentity("thm-kunle2", R1, 1, t_kunle2, rhs_kunle2, 2, "Theorem (kunle2)", _r(1, 2, 3, 4))
THM_501 = SeriesIdentity(
    "thm-5.0.1", (Param("m", 0), Param("r", 1)), 0, t_501, rhs_501, 2, "Theorem 5.0.1",
    ({"m": 0, "r": 1}, {"m": 1, "r": 1}, {"m": 1, "r": 2}, {"m": 2, "r": 3}, {"m": 3, "r": 2}),
)
CORO1 = SeriesIdentity("thm-5.0.1-coro1", R1, 0, t_coro1, rhs_coro1, 2, "Corollary (coro1)", _r(1, 2, 3, 4))
THM_502 = SeriesIdentity("thm-5.0.2", R0, 1, t_502, rhs_502, 4, "Theorem 5.0.2", _r(0, 1, 2, 3))
THM_503 = SeriesIdentity("thm-5.0.3", R0, 1, t_503, rhs_503, 2, "Theorem 5.0.3", _r(0, 1, 2, 3))
THM_504 = SeriesIdentity("thm-5.0.4", R0, 1, t_504, rhs_504, 4, "Theorem 5.0.4", _r(0, 1, 2, 3))
THM_505 = SeriesIdentity("thm-5.0.5", R0, 1, t_505, rhs_505, 3, "Theorem 5.0.5", _r(0, 1, 2, 3))
POCH = SeriesIdentity(
    "thm-5.0.2-pochhammer-form", R0, 1, t_502_pochhammer, rhs_502_pochhammer, 4,
    "Remark (remark), simplified form of Theorem 5.0.2", _r(0, 1, 2, 3),
)
SEC6 = SeriesIdentity("thm-sec6", R3, 1, t_sec6, rhs_sec6, 2, "Final theorem with Eq. (bounty)", _r(3, 4, 5, 6))

_EXAMPLES = [
    _example(THM_215, {1: _vec(one=Q(2, 225), sqrt2=Q(2, 225)), 2: _vec(one=Q(-88, 22050), sqrt2=Q(137, 22050))},
             "Example after Theorem 2.1.5"),
    _example(THM_216, {1: _vec(one=Q(-8, 60), sqrt2=Q(7, 60)), 2: _vec(one=Q(-64, 5040), sqrt2=Q(71, 5040))},
             "Example after Theorem 2.1.6"),
    _example(KUNLE1, {
        0: _vec(one=3, sqrt2=-2),
        1: _vec(one=Q(11, 30), sqrt2=Q(-7, 30)),
        2: _vec(one=Q(172, 2520), sqrt2=Q(-107, 2520)),
        3: _vec(one=Q(6808, 480480), sqrt2=Q(-4175, 480480)),
    }, "Corollary of Theorem (kunle1)"),
    _example(KUNLE2, {
        1: _vec(one=Q(-1, 3), sqrt2=Q(1, 3)),
        2: _vec(one=Q(-26, 420), sqrt2=Q(27, 420)),
        3: _vec(one=Q(-712, 55440), sqrt2=Q(755, 55440)),
    }, "Corollary of Theorem (kunle2)"),
    _example(THM_502, {0: _vec(pi_sq=Q(1, 2048)), 1: _vec(one=Q(64, 147456), pi_sq=Q(9, 147456))},
             "Example after Theorem 5.0.2"),
    _example(THM_503, {1: _vec(one=Q(16, 2048), pi_sq=Q(5, 2048)), 2: _vec(one=Q(40, 18432), pi_sq=Q(9, 18432))},
             "Example after Theorem 5.0.3"),
    _example(THM_504, {0: _vec(one=Q(-88, 288), pi_sq=Q(9, 288)), 1: _vec(one=Q(-137, 2880), pi_sq=Q(5, 1024))},
             "Example after Theorem 5.0.4"),
    _example(THM_505, {0: _vec(one=Q(92, 288), pi_sq=Q(-9, 288)), 1: _vec(one=Q(59, 1440), pi_sq=Q(-1, 256))},
             "Example after Theorem 5.0.5"),
    _example(POCH, {0: _vec(pi_sq=Q(1, 512)), 1: _vec(one=Q(64, 9216), pi_sq=Q(9, 9216))},
             "Particular cases of the simplified form"),
    _example(SEC6, {
        3: _vec(one=209, sqrt2=-110, ln2=102, ln1p=-102) * Q(8, 9),
        4: _vec(one=2407, sqrt2=-1396, ln2=-444, ln1p=444) * Q(2, 9),
        5: _vec(one=4537, sqrt2=-1948, ln2=780, ln1p=-780) * Q(4, 15),
    }, "Example after the final theorem"),
]

_INTRO = [
    _fixed(
        "intro-bhandari-1", t_bhandari_1, {}, 1, _vec(one=-4, sqrt2=4), 2,
        "Introduction, first identity for C(2n,n)/C(4n,2n)",
        erratum=(
            "printed with the sum from n = 0; the n = 0 term equals 1 and the printed "
            "value 4(sqrt2 - 1) holds for the sum from n = 1"
        ),
        first_defined=0,
    ),
    _fixed("intro-bhandari-2", t_214, {"r": 1}, 1, _vec(one=Q(-4, 9), sqrt2=Q(5, 9)), 2,
           "Introduction, second identity for C(2n,n)/C(4n,2n)", parent="thm-2.1.4"),
    _fixed("intro-bhandari-3", t_bhandari_3, {}, 0, None, 2,
           "Introduction, identity for C(2n,n) C(4n,2n)", rhs_numeric=rhs_bhandari_3_numeric),
    _fixed("intro-showcase-1", t_kunle2, {"r": 2}, 1, _vec(one=Q(-26, 420), sqrt2=Q(27, 420)), 2,
           "Introduction, first showcase identity", parent="thm-kunle2"),
    _fixed(
        "intro-showcase-2", t_503, {"r": 1}, 1, _vec(one=Q(16, 2048), pi_sq=Q(5, 2048)), 2,
        "Introduction, second showcase identity", parent="thm-5.0.3",
        erratum="printed as (16 + 5 pi^2)/1024; the series sums to (16 + 5 pi^2)/2048",
    ),
    _fixed("intro-showcase-3", t_504, {"r": 1}, 1, _vec(one=Q(-137, 2880), pi_sq=Q(5, 1024)), 4,
           "Introduction, third showcase identity", parent="thm-5.0.4"),
]

INTRO_SHOWCASE_2_PRINTED = _vec(one=Q(16, 1024), pi_sq=Q(5, 1024))

SERIES: list[SeriesIdentity] = _INTRO + [
    THM_214, THM_215, THM_216, KUNLE1, KUNLE2, THM_501, CORO1,
    THM_502, THM_503, THM_504, THM_505, POCH, SEC6,
] + _EXAMPLES


# ------------------------------------------------------ generating functions


def _catalan(m: int) -> mpq:
    return Q(central_binomial(m), m + 1)


def gf_201(n, x, p):
    return Q(n * C(2 * n, n), 4**n * (2 * n - 1) ** 2 * (2 * n + 1) * (2 * n + 3)) * x ** (2 * n + 3)


def rhs_201(x, p, ctx):
    return ((8 * x**4 - 8 * x**2 + 3) * ctx.asin(x) + ctx.sqrt(1 - x**2) * (6 * x**3 - 3 * x)) / 128


def gf_buhari(n, x, p):
    return Q(n * C(2 * n, n), 4**n * (2 * n - 1) ** 2 * (2 * n + 1)) * x ** (2 * n)


def rhs_buhari(x, p, ctx):
    return (ctx.sqrt(1 - x**2) + 2 * x * ctx.asin(x) - ctx.asin(x) / x) / 8


def gf_202(n, x, p):
    return Q(2 * n * n * C(2 * n, n), 4**n * (2 * n - 1) ** 2 * (2 * n + 1)) * x ** (2 * n + 1)


def rhs_202(x, p, ctx):
    return ((2 * x**2 + 1) * ctx.asin(x) - x * ctx.sqrt(1 - x**2)) / 8


def gf_203(n, x, p):
    # x^(n + 3/2) = x^n * x^(3/2); the half-integer power is the prefactor
    return Q(2, n * (2 * n + 3) * C(2 * n, n)) * x**n


def pre_203(x, ctx):
    return x * ctx.sqrt(x)


def rhs_203(x, p, ctx):
    s = ctx.sqrt(x / (4 - x))
    return ctx.mpf(4) / 9 * ctx.sqrt(4 - x) * (s * (x + 24) - 3 * (x + 8) * ctx.atan(s))


def gf_204(n, x, p):
    return Q(C(2 * n, n), 2 ** (2 * n + 1) * (n + 1) * (2 * n + 3)) * x ** (2 * n + 2)


def rhs_204(x, p, ctx):
    return 1 - x**2 / 6 - ctx.sqrt(1 - x**2) / 2 - ctx.asin(x) / (2 * x)


def gf_206(n, x, p):
    return Q(C(2 * n, n), 2 ** (2 * n + 1) * (n + 1) * (2 * n + 1) * (2 * n + 3)) * x ** (2 * n + 2)


def rhs_206(x, p, ctx):
    return (9 * ctx.sqrt(1 - x**2) + (6 * x**2 + 3) / x * ctx.asin(x) - 2 * x**2 - 12) / 12


def gf_g1t(n, x, p):
    return _catalan(2 * n - 1) * Q(1, 4 ** (2 * n - 1)) * x ** (2 * n - 1)


def rhs_g1t(x, p, ctx):
    y = ctx.asin(x)
    return 4 * ctx.sin(y / 4) ** 2 / x


def gf_g2t(n, x, p):
    return _catalan(2 * n) * Q(1, 16**n) * x ** (2 * n)


def rhs_g2t(x, p, ctx):
    return 1 / ctx.cos(ctx.asin(x) / 2)


def gf_boyadzhiev(n, x, p):
    m = p["m"]
    return Q(C(2 * n, n), n + m + 1) * x ** (n + m + 1)


def rhs_boyadzhiev(x, p, ctx):
    m = p["m"]
    root = ctx.sqrt(1 - 4 * x)
    acc = ctx.zero
    for k in range(m + 1):
        acc += ctx.mpf(int((-1) ** k * C(m, k))) / (2 * k + 1) * (1 - (1 - 4 * x) ** k * root)
    return acc / 2 ** (2 * m + 1)


UNIT = (Q(-1), Q(1), True, True)
_HALVES = (({}, Q(1, 2)), ({}, Q(3, 4)))

GF: list[GFIdentity] = [
    GFIdentity("gf-lemma-2.0.1", (), 1, gf_201, rhs_201, UNIT, "Lemma 2.0.1", _HALVES),
    GFIdentity("gf-buhari", (), 1, gf_buhari, rhs_buhari, UNIT, "Eq. (buhari)", _HALVES, excluded=(Q(0),)),
    GFIdentity("gf-lemma-2.0.2", (), 1, gf_202, rhs_202, UNIT, "Lemma 2.0.2", _HALVES, excluded=(Q(0),)),
    GFIdentity(
        "gf-lemma-2.0.3", (), 1, gf_203, rhs_203, (Q(0), Q(4), True, False), "Lemma 2.0.3",
        (({}, Q(1)), ({}, Q(2))), prefactor=pre_203,
    ),
    GFIdentity("gf-lemma-2.0.4", (), 1, gf_204, rhs_204, UNIT, "Lemma 2.0.4", _HALVES, excluded=(Q(0),)),
    GFIdentity("gf-lemma-2.0.6", (), 1, gf_206, rhs_206, UNIT, "Lemma 2.0.6", _HALVES, excluded=(Q(0),)),
    GFIdentity(
        "gf-G1t", (), 1, gf_g1t, rhs_g1t, UNIT, "Lemma on G1 (trigonometric version), x = sin y",
        _HALVES, excluded=(Q(0),),
    ),
    GFIdentity(
        "gf-G2t", (), 0, gf_g2t, rhs_g2t, UNIT, "Lemma on G2 (trigonometric version), x = sin y",
        _HALVES, first_defined=0,
        erratum=(
            "printed with the sum from n = 1; the closed form 1/cos(y/2) includes the n = 0 "
            "term C_0 = 1, as in the form used inside the proof of Theorem (kunle1) "
            "(whose 4^n there should read 16^n)"
        ),
    ),
    GFIdentity(
        "gf-boyadzhiev", (Param("m", 0),), 0, gf_boyadzhiev, rhs_boyadzhiev,
        (Q(-1, 4), Q(1, 4), False, False), "Lemma (Boyadzhiev), Eq. (section3)",
        tuple(({"m": m}, x) for m in range(4) for x in (Q(1, 8), Q(-1, 8))),
    ),
]


def _build_default() -> Registry:
    return Registry([*SERIES, *GF])


DEFAULT_REGISTRY = _build_default()


# ---------------------------------------------------------------- queries


@dataclass(frozen=True)
class Descriptor:
    id: str
    kind: str
    domain: str
    paper_ref: str
    decay_class: str
    start_index: int
    erratum: str

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "domain": self.domain,
            "paper_ref": self.paper_ref,
            "decay_class": self.decay_class,
            "start_index": self.start_index,
            "erratum": self.erratum,
        }


def describe(entry: Entry) -> Descriptor:
    if isinstance(entry, SeriesIdentity):
        domain = entry.domain()
        decay = f"n^-{entry.decay_class}"
    else:
        domain = entry.domain_text()
        decay = entry.decay_class
    return Descriptor(entry.id, entry.kind, domain, entry.paper_ref, decay, entry.start_index, entry.erratum)


def catalog_list(registry: Registry | None = None) -> list[Descriptor]:
    """Descriptors for every registered identity, in registration order."""
    reg = DEFAULT_REGISTRY if registry is None else registry
    return [describe(e) for e in reg]


def get_entry(entry_id: str, registry: Registry | None = None) -> Entry:
    reg = DEFAULT_REGISTRY if registry is None else registry
    return reg[entry_id]


def term_at(entry_id: str, params: Params | None, n: int, registry: Registry | None = None) -> mpq:
    """Exact n-th term of a series entry (n may go down to its first defined index)."""
    entry = get_entry(entry_id, registry)
    if not isinstance(entry, SeriesIdentity):
        raise ParamOutOfDomain(f"{entry_id} is a generating-function identity; use verify_gf")
    p = entry.check_params(params)
    if n < entry.lowest_defined():
        raise ParamOutOfDomain(f"n = {n} is below the first defined index {entry.lowest_defined()}")
    return entry.term(n, p)


def rhs_closed(entry_id: str, params: Params | None, registry: Registry | None = None) -> ConstVec:
    """Exact right-hand side of a series entry."""
    entry = get_entry(entry_id, registry)
    if not isinstance(entry, SeriesIdentity):
        raise ParamOutOfDomain(f"{entry_id} is a generating-function identity")
    p = entry.check_params(params)
    if entry.rhs is None:
        raise NumericOnlyRHS(f"{entry_id} has a right-hand side outside the constant basis")
    return entry.rhs(p)


def default_sweep(registry: Registry | None = None) -> list[tuple[Entry, dict, Optional[mpq]]]:
    """(entry, params, x) work items of the default sweep, ordered by id then params."""
    reg = DEFAULT_REGISTRY if registry is None else registry
    items = []
    for e in reg:
        if isinstance(e, SeriesIdentity):
            items.extend((e, dict(p), None) for p in e.sweep)
        else:
            items.extend((e, dict(p), x) for p, x in e.samples)
    items.sort(key=lambda it: (it[0].id, sorted(it[1].items()), it[2] if it[2] is not None else 0))
    return items
