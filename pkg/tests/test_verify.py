from __future__ import annotations

import dataclasses
import json

import mpmath
import pytest
from gmpy2 import mpq

from cbseries.catalog import (
    DEFAULT_REGISTRY,
    INTRO_SHOWCASE_2_PRINTED,
    GFIdentity,
    Registry,
    SeriesIdentity,
    get_entry,
)
from cbseries.errors import DomainError, ParamOutOfDomain, UnknownIdentity
from cbseries.exact import ONE
from cbseries.verify import METHODS, REPORT_FIELDS, verify_all, verify_gf, verify_series

ORACLE = mpmath.MPContext()
ORACLE.dps = 40


def _m(x):
    return ORACLE.mpf(x)


@pytest.fixture(scope="module")
def default_reports():
    return verify_all()


def test_kunle1_corollary_example():
    rep = verify_series("thm-kunle1-corollary", {"r": 0}, "1e-8", 5000)
    assert rep.passed and _m(rep.abs_discrepancy) < _m("1e-8")
    assert abs(_m(rep.reference) - (3 - 2 * ORACLE.sqrt(2))) < _m("1e-38")


def test_215_example():
    rep = verify_series("thm-2.1.5-example", {"r": 1}, "1e-8", 5000)
    assert rep.passed
    assert abs(_m(rep.reference) - (2 + 2 * ORACLE.sqrt(2)) / 225) < _m("1e-35")


def test_estimate_matches_independent_nsum():
    # mpmath's nsum on float-evaluated terms is independent of the exact engine
    def t214(n):
        return 4**n * n * ORACLE.binomial(2 * n, n) / ((2 * n - 1) ** 2 * (4 * n + 1) * ORACLE.binomial(4 * n, 2 * n))

    ref = ORACLE.nsum(t214, [1, ORACLE.inf])
    rep = verify_series("thm-2.1.4", {"r": 1})
    assert abs(_m(rep.estimate) - ref) < _m("1e-10")
    assert abs(ref - (5 * ORACLE.sqrt(2) - 4) / 9) < _m("1e-25")


def test_numeric_only_entry_verifies():
    rep = verify_series("intro-bhandari-3", {})
    assert rep.passed
    assert abs(_m(rep.reference) - 8 * ORACLE.sqrt(2) / (3 * ORACLE.pi)) < _m("1e-35")


def _perturbed(entry_id, delta):
    entry = get_entry(entry_id)
    return dataclasses.replace(entry, rhs=lambda p, f=entry.rhs: f(p) + ONE * delta)


def test_negative_control_fails():
    bad = _perturbed("thm-kunle1-corollary", mpq(1, 1000))
    rep = verify_series(bad, {"r": 0})
    assert rep.verdict == "fail"
    assert abs(_m(rep.abs_discrepancy) - _m("1e-3")) < _m("1e-8")
    good = verify_series("thm-kunle1-corollary", {"r": 0})
    assert good.passed


def test_verbatim_first_intro_identity_is_flagged():
    verbatim = dataclasses.replace(get_entry("intro-bhandari-1"), start_index=0)
    rep = verify_series(verbatim, {})
    assert rep.verdict == "fail"
    assert rep.offset_note and "t(0)" in rep.offset_note
    assert abs(_m(rep.abs_discrepancy) - 1) < _m("1e-8")
    assert verify_series("intro-bhandari-1", {}).offset_note is None


def test_late_start_is_flagged_from_below():
    late = dataclasses.replace(get_entry("thm-kunle1-corollary"), start_index=2, first_defined=1)
    rep = verify_series(late, {"r": 0})
    assert rep.verdict == "fail" and "t(1)" in rep.offset_note


def test_printed_second_showcase_value_fails():
    entry = dataclasses.replace(get_entry("intro-showcase-2"), rhs=lambda p: INTRO_SHOWCASE_2_PRINTED)
    rep = verify_series(entry, {})
    assert rep.verdict == "fail"
    assert verify_series("intro-showcase-2", {}).passed


def test_small_budget_gives_nonconvergence():
    rep = verify_series("thm-sec6", {"r": 6}, "1e-8", 100)
    assert rep.verdict == "fail" and not rep.converged
    assert "NonConvergence" in rep.detail
    assert rep.terms_used <= 100


def test_argument_validation():
    with pytest.raises(ValueError):
        verify_series("thm-kunle1", {"r": 0}, "1e-8", 99)
    with pytest.raises(ValueError):
        verify_series("thm-kunle1", {"r": 0}, "0")
    with pytest.raises(ValueError):
        verify_series("thm-kunle1", {"r": 0}, "-1e-3")
    with pytest.raises(ParamOutOfDomain):
        verify_series("thm-kunle2", {"r": 0})
    with pytest.raises(ParamOutOfDomain):
        verify_series("gf-buhari", {})
    with pytest.raises(UnknownIdentity):
        verify_series("nope", {})
    with pytest.raises(ValueError):
        verify_all(max_terms=50)


def test_gf_examples():
    rep = verify_gf("gf-lemma-2.0.4", mpq(1, 2), 200, 30)
    assert rep.passed and rep.method == "exact" and rep.params["x"] == "1/2"
    x = _m(1) / 2
    ref = 1 - x**2 / 6 - ORACLE.sqrt(1 - x**2) / 2 - ORACLE.asin(x) / (2 * x)
    assert abs(_m(rep.reference) - ref) < _m("1e-28")
    g2 = verify_gf("gf-G2t", mpq(1, 2))
    assert g2.passed
    assert abs(_m(g2.reference) - 1 / ORACLE.cos(ORACLE.pi / 12)) < _m("1e-35")
    assert verify_gf("gf-boyadzhiev", mpq(1, 8), params={"m": 2}).passed


def test_gf_domain_errors():
    with pytest.raises(DomainError):
        verify_gf("gf-lemma-2.0.4", mpq(1))
    with pytest.raises(DomainError):
        verify_gf("gf-buhari", mpq(0))
    with pytest.raises(DomainError):
        verify_gf("gf-lemma-2.0.3", mpq(4))
    with pytest.raises(DomainError):
        verify_gf("gf-boyadzhiev", mpq(1, 4), params={"m": 0})
    with pytest.raises(ValueError):
        verify_gf("gf-lemma-2.0.4", mpq(1, 2), truncation=10)
    with pytest.raises(TypeError):
        verify_gf("gf-lemma-2.0.4", 0.5)


def test_gf_verbatim_G2_start_is_flagged():
    verbatim = dataclasses.replace(get_entry("gf-G2t"), start_index=1)
    rep = verify_gf(verbatim, mpq(1, 2))
    assert rep.verdict == "fail"
    assert rep.offset_note and "t(0)" in rep.offset_note


def test_gf_reaches_twenty_digits():
    for entry in DEFAULT_REGISTRY:
        if isinstance(entry, GFIdentity):
            for p, x in entry.samples:
                rep = verify_gf(entry, x, 500, 60, p)
                assert rep.passed and _m(rep.abs_discrepancy) < _m("1e-20"), (entry.id, p, x)


def test_default_run(default_reports):
    assert len(default_reports) >= 60
    failed = [(r.id, r.params, r.detail) for r in default_reports if not r.passed]
    assert not failed
    keys = [r.id for r in default_reports]
    assert keys == sorted(keys)


def test_verdict_rule(default_reports):
    for r in default_reports:
        assert r.method in METHODS
        assert r.passed == (r.converged and _m(r.abs_discrepancy) <= _m(r.tolerance))


def test_report_schema(default_reports):
    for r in default_reports:
        d = json.loads(r.to_json())
        assert tuple(d) == REPORT_FIELDS
        assert d["verdict"] in ("pass", "fail")
        assert isinstance(d["terms_used"], int)


def test_determinism_and_parallel_equality(default_reports):
    again = verify_all()
    parallel = verify_all(jobs=2)
    first = [r.to_json() for r in default_reports]
    assert first == [r.to_json() for r in again]
    assert first == [r.to_json() for r in parallel]


def test_small_budget_sweep_fails_quadratic_entries():
    reg = Registry([get_entry(i) for i in ("thm-kunle1", "thm-5.0.2", "thm-sec6")])
    reports = verify_all(max_terms=100, registry=reg)
    slow = [r for r in reports if r.id != "thm-5.0.2" and not r.passed]
    assert slow and all("NonConvergence" in r.detail for r in slow)


def test_empty_registry():
    assert verify_all(registry=Registry([])) == []


def test_broken_entry_does_not_abort_batch():
    def boom(n, p):
        raise ZeroDivisionError("broken term")

    broken = dataclasses.replace(get_entry("thm-kunle1"), term=boom)
    reg = Registry([broken, get_entry("thm-5.0.2")])
    reports = verify_all(registry=reg)
    assert [r.id for r in reports].count("thm-kunle1") == len(broken.sweep)
    assert all(not r.passed and "broken term" in r.detail for r in reports if r.id == "thm-kunle1")
    assert all(r.passed for r in reports if r.id == "thm-5.0.2")
