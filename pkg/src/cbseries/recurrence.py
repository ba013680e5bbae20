"""First-order linear recurrences with non-constant coefficients.

A :class:`RecurrenceSpec` describes ``a(n) z(n) = b(n) z(n-1) + r(n)`` for
n >= 1 with initial value z(0).  Transition coefficients are rationals; the
inhomogeneity and the state are ConstVec, so solving never needs a product of
two constant vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from gmpy2 import mpq

from .errors import ZeroCoefficient
from .exact import ConstVec, RationalLike, rational


def _vec(x) -> ConstVec:
    return x if isinstance(x, ConstVec) else ConstVec.rational(x)


@dataclass(frozen=True)
class RecurrenceSpec:
    """Data of ``a(n) z(n) = b(n) z(n-1) + r(n)``, n >= 1, with ``z(0) = z0``."""

    a: Callable[[int], RationalLike]
    b: Callable[[int], RationalLike]
    r: Callable[[int], ConstVec | RationalLike]
    z0: ConstVec | RationalLike = field(default_factory=ConstVec)


class ClosedFormSolver:
    """Evaluates the product formula

        z(n) = P(n) (z0 + sum_{k=1}^{n} r(k) / (b(k) P(k-1))),   P(n) = prod_{j<=n} b(j)/a(j)

    with prefix quantities kept incrementally, so moving from n to n+1 costs a
    constant number of rational operations.  ``multiplications`` counts the
    rational multiplications and divisions performed so far.  Instances hold
    mutable caches and are not meant to be shared between threads.
    """

    def __init__(self, spec: RecurrenceSpec):
        self.spec = spec
        self.multiplications = 0
        self._z0 = _vec(spec.z0)
        # inverse prefix products 1/P(k) and partial sums, index k = 0..n
        self._inv_p: list[mpq] = [mpq(1)]
        self._sums: list[ConstVec] = [ConstVec()]

    def _extend(self, n: int) -> None:
        for k in range(len(self._inv_p), n + 1):
            ak = rational(self.spec.a(k))
            bk = rational(self.spec.b(k))
            if ak == 0:
                raise ZeroCoefficient(k, "a")
            if bk == 0:
                raise ZeroCoefficient(k, "b")
            inv_prev = self._inv_p[-1]
            coef = inv_prev / bk
            self._sums.append(self._sums[-1] + _vec(self.spec.r(k)) * coef)
            self._inv_p.append(coef * ak)
            self.multiplications += 3

    def value(self, n: int) -> ConstVec:
        if n < 0:
            raise ValueError("n must be non-negative")
        self._extend(n)
        self.multiplications += 1
        return (self._z0 + self._sums[n]) / self._inv_p[n]


def solve_closed(spec: RecurrenceSpec, n: int) -> ConstVec:
    """z(n) by the closed product formula, using exact prefix products."""
    return ClosedFormSolver(spec).value(n)


def solve_iterative(spec: RecurrenceSpec, n: int) -> ConstVec:
    """z(n) by direct recursion z(k) = (b(k) z(k-1) + r(k)) / a(k)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    z = _vec(spec.z0)
    for k in range(1, n + 1):
        ak = rational(spec.a(k))
        if ak == 0:
            raise ZeroCoefficient(k, "a")
        z = (z * rational(spec.b(k)) + _vec(spec.r(k))) / ak
    return z


def solve_affine_form(
    x0: ConstVec | RationalLike,
    a: Callable[[int], RationalLike],
    b: Callable[[int], ConstVec | RationalLike],
    n: int,
) -> ConstVec:
    """x(n) for ``x(k+1) = a(k) x(k) + b(k)``, k >= 0, via

        x(n) = a(0)...a(n-1) (x0 + sum_{k=0}^{n-1} b(k) / (a(0)...a(k)))
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    prod = mpq(1)
    acc = _vec(x0)
    for k in range(n):
        ak = rational(a(k))
        if ak == 0:
            raise ZeroCoefficient(k, "a")
        prod *= ak
        acc = acc + _vec(b(k)) / prod
    return acc * prod


def to_affine(spec: RecurrenceSpec):
    """Transcribe a spec into affine form: a'(k) = b(k+1)/a(k+1), b'(k) = r(k+1)/a(k+1)."""

    def a_aff(k: int) -> mpq:
        ak = rational(spec.a(k + 1))
        if ak == 0:
            raise ZeroCoefficient(k + 1, "a")
        return rational(spec.b(k + 1)) / ak

    def b_aff(k: int) -> ConstVec:
        return _vec(spec.r(k + 1)) / rational(spec.a(k + 1))

    return a_aff, b_aff
