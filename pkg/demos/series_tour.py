"""Summing a few catalog series and what a failing check looks like."""

from __future__ import annotations

import dataclasses

from cbseries import get_entry, rhs_closed, term_at, verify_gf, verify_series
from cbseries.exact import ONE

# first terms are exact rationals
print("kunle1 r=0 terms:", [str(term_at("thm-kunle1", {"r": 0}, n)) for n in range(1, 5)])
print("rhs:", rhs_closed("thm-kunle1-corollary", {"r": 0}))

for entry_id, params in [
    ("thm-kunle1-corollary", {"r": 0}),
    ("thm-2.1.5-example", {"r": 1}),
    ("thm-5.0.3-example", {"r": 1}),
    ("thm-sec6-example", {"r": 5}),
]:
    rep = verify_series(entry_id, params)
    print(f"{rep.verdict} {entry_id} {params} {rep.method} terms={rep.terms_used} |diff|={float(rep.abs_discrepancy):.1e}")

# negative control: nudge the right-hand side by 1e-3
entry = get_entry("thm-kunle1-corollary")
nudged = dataclasses.replace(entry, rhs=lambda p: entry.rhs(p) + ONE / 1000)
print("nudged:", verify_series(nudged, {"r": 0}).verdict)

# the first introduction identity as printed, summed from n = 0
verbatim = dataclasses.replace(get_entry("intro-bhandari-1"), start_index=0)
rep = verify_series(verbatim, {})
print("verbatim start:", rep.verdict, "|", rep.offset_note)

# generating functions are summed exactly at a rational point
rep = verify_gf("gf-lemma-2.0.3", 2)
print(f"gf-lemma-2.0.3 at x=2: {rep.verdict} |diff|={float(rep.abs_discrepancy):.1e}")
