"""Exact closed forms of the integral families, checked against quadrature."""

from __future__ import annotations

import mpmath

from cbseries import closed_B, closed_wp
from cbseries.closed_forms import INTEGRALS, nu_pair
from cbseries.numerics import eval_constvec, tanh_sinh_integrate

# B(k) = int_0^{1/2} t^k / sqrt(1-t) dt lives in span{1, sqrt2}
for k in range(5):
    print(f"B({k}) = {closed_B(k)}")

# x sin^q x over [0, pi/2]: rational for odd q, a pi^2 part for even q
for q in range(1, 11):
    print(f"wp({q}) = {closed_wp(q)}")

# nu1(k)/nu2(k) creeps towards sqrt2
for k in (10, 50, 100):
    nu1, nu2 = nu_pair(k)
    print(f"k={k:3}  nu1/nu2 = {float(nu1 / nu2):.12f}")

# every family against a 40-digit tanh-sinh run; the difference needs 50 digits too
mpmath.mp.dps = 50
for name, fam in INTEGRALS.items():
    p = fam.minimum + 3
    exact = eval_constvec(fam.closed(p), 40)
    quad = tanh_sinh_integrate(fam.integrand(p), fam.lower, fam.upper, 40)
    gap = abs(exact - quad.value)
    print(f"{name:8} {fam.param}={p}  closed={fam.closed(p)}  |closed - quad| = {mpmath.nstr(gap, 2)}")
