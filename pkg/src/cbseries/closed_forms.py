"""Exact closed forms of the integral families behind the series catalog.

Every value is a :class:`ConstVec` built by exact rational summation.  The
module also records each family's defining integral (used as a quadrature
oracle) and the first-order recurrence it satisfies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from gmpy2 import mpq

from .errors import DomainError
from .exact import (
    LN_1P_SQRT2,
    ONE,
    PI,
    PI_LN2,
    PI_LN_1P_SQRT2,
    PI_SQ,
    PI_SQRT2,
    SQRT2,
    ConstVec,
    binomial,
    central_binomial,
)
from .recurrence import RecurrenceSpec


def _check(name: str, value: int, minimum: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"{name} must be an int")
    if value < minimum:
        raise DomainError(f"{name} = {value} is out of domain ({name} >= {minimum})")


def wallis_sin(m: int) -> ConstVec:
    """Integral of sin^m over [0, pi/2]."""
    _check("m", m, 0)
    n, odd = divmod(m, 2)
    if odd:
        return ONE * mpq(4**n, (2 * n + 1) * central_binomial(n))
    return PI * mpq(central_binomial(n), 2 * 4**n)


def beta_half(k: int) -> ConstVec:
    """B(k + 1/2, 1/2) = pi C(2k, k) / 4^k."""
    _check("k", k, 0)
    return PI * mpq(central_binomial(k), 4**k)


def nu_pair(k: int) -> tuple[mpq, mpq]:
    """(nu1(k), nu2(k)) with B(k) = nu1 - nu2 sqrt2."""
    _check("k", k, 0)
    nu1 = mpq(0)
    nu2 = mpq(0)
    for p in range(k + 1):
        c = mpq((-1) ** p * binomial(k, p), 2 * p + 1)
        nu1 += 2 * c
        nu2 += c / 2**p
    return nu1, nu2


def closed_B(k: int) -> ConstVec:
    """Integral of t^k / sqrt(1-t) over [0, 1/2]."""
    nu1, nu2 = nu_pair(k)
    return ONE * nu1 - SQRT2 * nu2


def closed_phi_odd(k: int) -> ConstVec:
    """Integral of t^(2k+1) sqrt(1+t^2) over [0, 1]."""
    _check("k", k, 0)
    one = mpq(0)
    root = mpq(0)
    for p in range(k + 1):
        c = mpq((-1) ** (k - p) * binomial(k, p), 2 * p + 3)
        root += c * 2 ** (p + 1)
        one -= c
    return ONE * one + SQRT2 * root


def closed_phi_even(k: int) -> ConstVec:
    """Integral of t^(2k) sqrt(1+t^2) over [0, 1]."""
    _check("k", k, 0)
    s = sum((mpq((-1) ** p * 4**p, central_binomial(p)) for p in range(1, k + 1)), mpq(0))
    inner = SQRT2 * (mpq(1, 2) + s) + LN_1P_SQRT2 * mpq(1, 2)
    return inner * mpq((-1) ** k * central_binomial(k), 4**k * (k + 1))


def closed_K(r: int) -> ConstVec:
    """Integral of sin^(2r) x sin(x/2) over [0, pi/2]."""
    _check("r", r, 0)
    s = sum((mpq(binomial(4 * k, 2 * k), (4 * k - 1) * 16**k) for k in range(r + 1)), mpq(0))
    return (ONE * 2 + SQRT2 * s) * mpq(16**r, (4 * r + 1) * binomial(4 * r, 2 * r))


def closed_I(r: int) -> ConstVec:
    """Integral of sin^(2r-1) x cos(x/2) over [0, pi/2], defined for r >= 1."""
    _check("r", r, 1)
    s = sum((mpq(binomial(4 * k, 2 * k), (6 * k + 3) * 16**k) for k in range(r)), mpq(0))
    return (ONE * mpq(4, 3) - SQRT2 * s) * mpq(6 * 16 ** (r - 1), r * binomial(4 * r, 2 * r))


def closed_wp(q: int) -> ConstVec:
    """Integral of z sin^q z over [0, pi/2]."""
    _check("q", q, 0)
    n, odd = divmod(q, 2)
    if odd:
        s = 1 + sum((mpq(central_binomial(k), 4**k * (2 * k + 1)) for k in range(1, n + 1)), mpq(0))
        return ONE * (s * mpq(4**n, (2 * n + 1) * central_binomial(n)))
    s = sum((mpq(4**k, k * k * central_binomial(k)) for k in range(1, n + 1)), mpq(0))
    return (PI_SQ * mpq(1, 2) + ONE * s) * mpq(central_binomial(n), 4 ** (n + 1))


def closed_omega(k: int) -> ConstVec:
    """omega_k = 2 sqrt2 pi - 2 B(k+3/2, 1/2) - 2 B(k+1/2, 1/2), for k >= 1."""
    _check("k", k, 1)
    return PI_SQRT2 * 2 - beta_half(k + 1) * 2 - beta_half(k) * 2


F0 = PI_SQRT2 * mpq(1, 2) - PI * mpq(1, 2) + PI_LN_1P_SQRT2 * mpq(1, 2) - PI_LN2 * mpq(1, 2)


def closed_F(r: int) -> ConstVec:
    """Integral of t^(r-1/2) sqrt(1+t) arcsin t over [0, 1]."""
    _check("r", r, 0)
    acc = F0
    for k in range(1, r + 1):
        acc = acc + closed_omega(k) * mpq((-1) ** k * 4**k, 2 * central_binomial(k))
    return acc * mpq((-1) ** r * central_binomial(r), 4**r * (r + 1))


# ------------------------------------------------------- defining integrals

HALF_PI = PI * mpq(1, 2)


@dataclass(frozen=True)
class IntegralFamily:
    """A closed form together with the integral it evaluates."""

    name: str
    param: str
    minimum: int
    closed: Callable[[int], ConstVec]
    integrand: Callable[[int], Callable]
    lower: object
    upper: object
    description: str


def _b_integrand(k):
    return lambda t: t**k / t.context.sqrt(1 - t)


def _phi_integrand(p):
    return lambda t: t**p * t.context.sqrt(1 + t * t)


def _k_integrand(r):
    return lambda x: x.context.sin(x) ** (2 * r) * x.context.sin(x / 2)


def _i_integrand(r):
    return lambda x: x.context.sin(x) ** (2 * r - 1) * x.context.cos(x / 2)


def _wp_integrand(q):
    return lambda x: x * x.context.sin(x) ** q


def _f_integrand(r):
    # t^(r - 1/2) written as t^r / sqrt(t) keeps the power integral
    return lambda t: t**r / t.context.sqrt(t) * t.context.sqrt(1 + t) * t.context.asin(t)


INTEGRALS: dict[str, IntegralFamily] = {
    fam.name: fam
    for fam in (
        IntegralFamily("B", "k", 0, closed_B, _b_integrand, 0, mpq(1, 2),
                       "int_0^{1/2} t^k / sqrt(1-t) dt"),
        IntegralFamily("phi-even", "k", 0, closed_phi_even, lambda k: _phi_integrand(2 * k), 0, 1,
                       "int_0^1 t^(2k) sqrt(1+t^2) dt"),
        IntegralFamily("phi-odd", "k", 0, closed_phi_odd, lambda k: _phi_integrand(2 * k + 1), 0, 1,
                       "int_0^1 t^(2k+1) sqrt(1+t^2) dt"),
        IntegralFamily("K", "r", 0, closed_K, _k_integrand, 0, HALF_PI,
                       "int_0^{pi/2} sin^(2r) x sin(x/2) dx"),
        IntegralFamily("I", "r", 1, closed_I, _i_integrand, 0, HALF_PI,
                       "int_0^{pi/2} sin^(2r-1) x cos(x/2) dx"),
        IntegralFamily("wp", "q", 0, closed_wp, _wp_integrand, 0, HALF_PI,
                       "int_0^{pi/2} x sin^q x dx"),
        IntegralFamily("F", "r", 0, closed_F, _f_integrand, 0, 1,
                       "int_0^1 t^(r-1/2) sqrt(1+t) arcsin t dt"),
    )
}


# --------------------------------------------------- defining recurrences


def recurrence_for(name: str) -> tuple[RecurrenceSpec, Callable[[int], ConstVec]]:
    """The first-order recurrence a family satisfies, and the map n -> family value
    that its solution z(n) should reproduce.

    Names: "K", "I" (solved through L(n) = I(n+1)), "phi-even", "wp-even"
    (z(n) = wp(2n)), "wp-odd" (z(n) = wp(2n+1)) and "F".
    """
    if name == "K":
        spec = RecurrenceSpec(
            a=lambda k: (k - mpq(1, 4)) * (k + mpq(1, 4)),
            b=lambda k: k * (k - mpq(1, 2)),
            r=lambda k: SQRT2 * mpq(1, 16),
            z0=closed_K(0),
        )
        return spec, closed_K
    if name == "I":
        spec = RecurrenceSpec(
            a=lambda k: (k + mpq(1, 4)) * (k + mpq(3, 4)),
            b=lambda k: k * (k + mpq(1, 2)),
            r=lambda k: SQRT2 * mpq(-1, 16),
            z0=closed_I(1),
        )
        return spec, lambda n: closed_I(n + 1)
    if name == "phi-even":
        spec = RecurrenceSpec(
            a=lambda n: n + 1,
            b=lambda n: -(n - mpq(1, 2)),
            r=lambda n: SQRT2,
            z0=SQRT2 * mpq(1, 2) + LN_1P_SQRT2 * mpq(1, 2),
        )
        return spec, closed_phi_even
    if name == "wp-even":
        spec = RecurrenceSpec(
            a=lambda n: 2 * n,
            b=lambda n: 2 * n - 1,
            r=lambda n: mpq(1, 2 * n),
            z0=PI_SQ * mpq(1, 8),
        )
        return spec, lambda n: closed_wp(2 * n)
    if name == "wp-odd":
        spec = RecurrenceSpec(
            a=lambda n: 2 * n + 1,
            b=lambda n: 2 * n,
            r=lambda n: mpq(1, 2 * n + 1),
            z0=ONE,
        )
        return spec, lambda n: closed_wp(2 * n + 1)
    if name == "F":
        spec = RecurrenceSpec(
            a=lambda n: 2 * n + 2,
            b=lambda n: -(2 * n - 1),
            r=closed_omega,
            z0=F0,
        )
        return spec, closed_F
    raise KeyError(f"no recurrence registered for {name!r}")


RECURRENCES = ("K", "I", "phi-even", "wp-even", "wp-odd", "F")

__all__ = [
    "wallis_sin", "beta_half", "nu_pair", "closed_B", "closed_phi_odd", "closed_phi_even",
    "closed_K", "closed_I", "closed_wp", "closed_omega", "closed_F", "F0",
    "INTEGRALS", "IntegralFamily", "recurrence_for", "RECURRENCES", "HALF_PI",
]
