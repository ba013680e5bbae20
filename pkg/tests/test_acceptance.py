"""The nine acceptance criteria, each timed against its runtime budget.

Every test prints one PASS/FAIL line (visible even under output capture).
"""

from __future__ import annotations

import dataclasses
import random
import time
from fractions import Fraction
from math import comb, factorial

import mpmath
from gmpy2 import mpq

from cbseries.catalog import DEFAULT_REGISTRY, GFIdentity, get_entry, rhs_closed
from cbseries.closed_forms import (
    INTEGRALS,
    closed_B,
    closed_I,
    closed_K,
    closed_phi_even,
    closed_wp,
    nu_pair,
    recurrence_for,
)
from cbseries.exact import LN2, LN_1P_SQRT2, ONE, PI_SQ, SQRT2, ConstName, ConstVec, binomial, central_binomial, pochhammer
from cbseries.numerics import eval_constvec, tanh_sinh_integrate
from cbseries.recurrence import RecurrenceSpec, solve_closed, solve_iterative
from cbseries.verify import verify_gf, verify_series

ORACLE = mpmath.MPContext()
ORACLE.dps = 60


def _m(x):
    return ORACLE.mpf(x)


def _criterion(capsys, number, title, budget, check):
    start = time.perf_counter()
    error = ""
    try:
        check()
    except AssertionError as exc:
        error = str(exc) or "assertion failed"
    elapsed = time.perf_counter() - start
    if not error and elapsed >= budget:
        error = f"over budget ({elapsed:.1f}s >= {budget}s)"
    status = "FAIL" if error else "PASS"
    line = f"{status} criterion {number}: {title} [{elapsed:.2f}s, budget {budget}s]"
    if error:
        line += f" :: {error.splitlines()[0]}"
    with capsys.disabled():
        print("\n" + line)
    assert not error, line


# ----------------------------------------------------------------- 1 and 2


def test_criterion_1_B_table(capsys):
    expected = [
        ONE * 2 - SQRT2,
        (ONE * 8 - SQRT2 * 5) / 6,
        (ONE * 64 - SQRT2 * 43) / 60,
        (ONE * 256 - SQRT2 * 177) / 280,
        (ONE * 4096 - SQRT2 * 2867) / 5040,
    ]

    def check():
        for k, value in enumerate(expected):
            assert closed_B(k) == value, f"B({k})"

    _criterion(capsys, 1, "closed_B(0..4) equals the stated table exactly", 1, check)


def test_criterion_2_wp_table(capsys):
    expected = {
        1: ONE,
        2: ONE / 4 + PI_SQ / 16,
        3: ONE * mpq(7, 9),
        4: ONE / 4 + PI_SQ * mpq(3, 64),
        5: ONE * mpq(149, 225),
        6: ONE * mpq(17, 72) + PI_SQ * mpq(5, 128),
        7: ONE * mpq(2161, 3675),
        8: ONE * mpq(2, 9) + PI_SQ * mpq(35, 1024),
        9: ONE * mpq(53089, 99225),
        10: ONE * mpq(21, 100) + PI_SQ * mpq(63, 2048),
    }

    def check():
        for q, value in expected.items():
            assert closed_wp(q) == value, f"wp({q})"

    _criterion(capsys, 2, "closed_wp(1..10) equals the stated table exactly", 1, check)


# ----------------------------------------------------------------------- 3


def test_criterion_3_quadrature(capsys):
    plan = [("B", 8), ("phi-even", 8), ("phi-odd", 8), ("K", 6), ("I", 6), ("F", 6)]

    def check():
        eps = _m(10) ** -30
        for name, top in plan:
            fam = INTEGRALS[name]
            for p in range(fam.minimum, top + 1):
                quad = tanh_sinh_integrate(fam.integrand(p), fam.lower, fam.upper, 40)
                exact = eval_constvec(fam.closed(p), 50)
                assert abs(_m(quad.value) - _m(exact)) < eps, f"{name}({p})"

    _criterion(capsys, 3, "40-digit tanh-sinh agrees with every closed form to 30 digits", 120, check)


# ----------------------------------------------------------------------- 4


def _random_spec(rng):
    def nonzero():
        return mpq(rng.choice([i for i in range(-9, 10) if i]), rng.randint(1, 9))

    basis = list(ConstName)
    a = [None] + [nonzero() for _ in range(60)]
    b = [None] + [nonzero() for _ in range(60)]
    r = [None] + [ConstVec({rng.choice(basis): nonzero()}) for _ in range(60)]
    return RecurrenceSpec(a=a.__getitem__, b=b.__getitem__, r=r.__getitem__, z0=ConstVec({rng.choice(basis): nonzero()}))


def test_criterion_4_recurrences(capsys):
    def check():
        rng = random.Random(20240601)
        for i in range(200):
            spec = _random_spec(rng)
            n = rng.randint(0, 60)
            assert solve_closed(spec, n) == solve_iterative(spec, n), f"random spec {i}"
        h = mpq(1, 2)
        for r in range(1, 31):
            assert closed_K(r) * ((r - mpq(1, 4)) * (r + mpq(1, 4))) == closed_K(r - 1) * (r * (r - h)) + SQRT2 / 16
        for r in range(2, 31):
            assert closed_I(r) * ((r - mpq(1, 4)) * (r - mpq(3, 4))) == closed_I(r - 1) * ((r - 1) * (r - h)) - SQRT2 / 16
        for m in range(30):
            assert closed_phi_even(m + 1) * (m + 2) == SQRT2 - closed_phi_even(m) * (m + h)
        for q in range(2, 31):
            assert closed_wp(q) == closed_wp(q - 2) * mpq(q - 1, q) + ONE * mpq(1, q * q)
        for name in ("K", "I", "phi-even", "wp-even", "wp-odd"):
            spec, target = recurrence_for(name)
            for n in range(31):
                assert solve_closed(spec, n) == target(n), f"{name}({n})"

    _criterion(capsys, 4, "closed = iterative on 200 random specs; K, I, phi-even, wp recurrences hold", 30, check)


# ----------------------------------------------------------------------- 5


def _coro1_value(r):
    value = Fraction(1, 2 * (2 * r - 1) * comb(2 * r - 2, r - 1)) - Fraction(1, 4**r * r)
    return ONE * mpq(value.numerator, value.denominator)


STATED = [
    ("thm-kunle1-corollary", {"r": 0}, ONE * 3 - SQRT2 * 2),
    ("thm-kunle1-corollary", {"r": 1}, (ONE * 11 - SQRT2 * 7) / 30),
    ("thm-kunle1-corollary", {"r": 2}, (ONE * 172 - SQRT2 * 107) / 2520),
    ("thm-kunle1-corollary", {"r": 3}, (ONE * 6808 - SQRT2 * 4175) / 480480),
    ("thm-kunle2-corollary", {"r": 1}, (SQRT2 - ONE) / 3),
    ("thm-kunle2-corollary", {"r": 2}, (SQRT2 * 27 - ONE * 26) / 420),
    ("thm-kunle2-corollary", {"r": 3}, (SQRT2 * 755 - ONE * 712) / 55440),
    ("thm-2.1.5-example", {"r": 1}, (ONE * 2 + SQRT2 * 2) / 225),
    ("thm-2.1.5-example", {"r": 2}, (SQRT2 * 137 - ONE * 88) / 22050),
    ("thm-2.1.6-example", {"r": 1}, (SQRT2 * 7 - ONE * 8) / 60),
    ("thm-2.1.6-example", {"r": 2}, (SQRT2 * 71 - ONE * 64) / 5040),
    ("thm-5.0.2-example", {"r": 0}, PI_SQ / 2048),
    ("thm-5.0.2-example", {"r": 1}, (ONE * 64 + PI_SQ * 9) / 147456),
    ("thm-5.0.3-example", {"r": 1}, (ONE * 16 + PI_SQ * 5) / 2048),
    ("thm-5.0.3-example", {"r": 2}, (ONE * 40 + PI_SQ * 9) / 18432),
    ("thm-5.0.4-example", {"r": 0}, (PI_SQ * 9 - ONE * 88) / 288),
    ("thm-5.0.4-example", {"r": 1}, PI_SQ * mpq(5, 1024) - ONE * mpq(137, 2880)),
    ("thm-5.0.5-example", {"r": 0}, (ONE * 92 - PI_SQ * 9) / 288),
    ("thm-5.0.5-example", {"r": 1}, ONE * mpq(59, 1440) - PI_SQ / 256),
    ("thm-5.0.2-pochhammer-form-example", {"r": 0}, PI_SQ / 512),
    ("thm-5.0.2-pochhammer-form-example", {"r": 1}, (PI_SQ * 9 + ONE * 64) / 9216),
    ("intro-bhandari-1", {}, (SQRT2 - ONE) * 4),
    ("intro-bhandari-2", {}, (SQRT2 * 5 - ONE * 4) / 9),
    *[("thm-5.0.1-coro1", {"r": r}, _coro1_value(r)) for r in range(1, 5)],
    ("thm-sec6-example", {"r": 3}, (ONE * 209 - SQRT2 * 110 + LN2 * 102 - LN_1P_SQRT2 * 102) * mpq(8, 9)),
    ("thm-sec6-example", {"r": 4}, (ONE * 2407 - SQRT2 * 1396 - LN2 * 444 + LN_1P_SQRT2 * 444) * mpq(2, 9)),
    ("thm-sec6-example", {"r": 5}, (ONE * 4537 - SQRT2 * 1948 + LN2 * 780 - LN_1P_SQRT2 * 780) * mpq(4, 15)),
]


def test_criterion_5_series(capsys):
    def check():
        bad = []
        for entry_id, params, value in STATED:
            assert rhs_closed(entry_id, params) == value, f"{entry_id} {params} registered value"
            rep = verify_series(entry_id, params, "1e-8", 20000, 60)
            if not (rep.passed and _m(rep.abs_discrepancy) <= _m("1e-8") and rep.terms_used <= 20000):
                bad.append(f"{entry_id}{params}")
        assert not bad, "failed: " + ", ".join(bad)

    _criterion(capsys, 5, f"{len(STATED)} stated series values reproduced to 1e-8", 600, check)


# ----------------------------------------------------------------------- 6


def test_criterion_6_generating_functions(capsys):
    def check():
        seen = set()
        for entry in DEFAULT_REGISTRY:
            if not isinstance(entry, GFIdentity):
                continue
            for params, x in entry.samples:
                rep = verify_gf(entry, x, 500, 60, params)
                assert rep.passed and _m(rep.abs_discrepancy) < _m("1e-20"), f"{entry.id} {params} x={x}"
                seen.add((entry.id, tuple(sorted(params.items()))))
        required = {"gf-lemma-2.0.1", "gf-lemma-2.0.2", "gf-lemma-2.0.3", "gf-lemma-2.0.4",
                    "gf-lemma-2.0.6", "gf-buhari", "gf-G1t", "gf-G2t"}
        assert required <= {i for i, _ in seen}
        assert {p for i, p in seen if i == "gf-boyadzhiev"} == {(("m", m),) for m in range(4)}

    _criterion(capsys, 6, "generating functions agree to 20 digits at two points each", 60, check)


# ----------------------------------------------------------------------- 7


def test_criterion_7_pochhammer(capsys):
    def check():
        for p in range(1, 7):
            for n in range(26):
                prod = mpq(1)
                for j in range(1, p + 1):
                    prod *= pochhammer(mpq(j, p), n)
                assert prod == mpq(factorial(p * n), p ** (p * n)), f"product p={p} n={n}"
        for n in range(201):
            assert pochhammer(mpq(1, 2), n) / factorial(n) == mpq(comb(2 * n, n), 4**n), f"half n={n}"
            lhs = pochhammer(mpq(1, 4), n) * pochhammer(mpq(3, 4), n) / factorial(n) ** 2
            assert lhs == mpq(comb(4 * n, 2 * n) * comb(2 * n, n), 4 ** (3 * n)), f"quarter n={n}"
        for n in range(31):
            for r in range(16):
                rhs = 4**r * pochhammer(n + mpq(1, 2), r) / pochhammer(n + 1, r) * central_binomial(n)
                assert binomial(2 * n + 2 * r, n + r) == rhs, f"ratio n={n} r={r}"

    _criterion(capsys, 7, "Pochhammer product, half/quarter and ratio identities hold exactly", 10, check)


# ----------------------------------------------------------------------- 8


def test_criterion_8_nu_limit(capsys):
    def gap(k):
        nu1, nu2 = nu_pair(k)
        return abs(_m(nu1.numerator) / _m(nu1.denominator) / (_m(nu2.numerator) / _m(nu2.denominator)) - ORACLE.sqrt(2))

    def check():
        g50, g100 = gap(50), gap(100)
        assert g50 < _m("1e-3"), f"gap(50) = {g50}"
        assert g100 < g50

    _criterion(capsys, 8, "nu1/nu2 approaches sqrt2", 1, check)


# ----------------------------------------------------------------------- 9


def test_criterion_9_negative_control(capsys):
    def check():
        entry = get_entry("thm-kunle1-corollary")
        bad = dataclasses.replace(entry, rhs=lambda p: entry.rhs(p) + ONE / 1000)
        good_rep = verify_series(entry, {"r": 0})
        bad_rep = verify_series(bad, {"r": 0})
        assert good_rep.verdict == "pass"
        assert bad_rep.verdict == "fail", "perturbed entry passed"

    _criterion(capsys, 9, "an entry with RHS + 1e-3 fails verification", 60, check)
