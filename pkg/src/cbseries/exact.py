"""Exact arithmetic: big integers, rationals, combinatorial primitives, and
the constant-vector field every closed form lives in.

Rationals are :class:`gmpy2.mpq` (always reduced, positive denominator), and
big integers are :class:`gmpy2.mpz`.  Both behave like the builtin numeric
types and mix freely with ``int``.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Mapping, Union

import gmpy2
from gmpy2 import mpq, mpz

Rational = mpq
RationalLike = Union[int, str, Fraction, mpq, mpz]


def rational(value: RationalLike) -> mpq:
    """Coerce ``value`` to an exact rational.

    Strings use ``"p/q"`` syntax.  Binary floats are refused because they
    almost never carry the value the caller meant.
    """
    if isinstance(value, float):
        raise TypeError("binary floats are not exact; pass an int, 'p/q' string or Fraction")
    if isinstance(value, str):
        value = value.strip()
    return mpq(value)


def binomial(n: int, k: int) -> mpz:
    """C(n, k), zero outside ``0 <= k <= n``."""
    if n < 0:
        raise ValueError(f"binomial requires n >= 0, got {n}")
    if k < 0 or k > n:
        return mpz(0)
    return gmpy2.comb(n, k)


def central_binomial(n: int) -> mpz:
    if n < 0:
        raise ValueError(f"central_binomial requires n >= 0, got {n}")
    return gmpy2.comb(2 * n, n)


def factorial(n: int) -> mpz:
    if n < 0:
        raise ValueError(f"factorial requires n >= 0, got {n}")
    return gmpy2.fac(n)


def pochhammer(x: RationalLike, n: int) -> mpq:
    """Rising factorial x(x+1)...(x+n-1), with ``(x)_0 = 1``."""
    if n < 0:
        raise ValueError(f"pochhammer requires n >= 0, got {n}")
    x = rational(x)
    out = mpq(1)
    for j in range(n):
        out *= x + j
    return out


def pow2(e: int) -> mpq:
    """Exact 2**e for any integer e."""
    return mpq(1 << e) if e >= 0 else mpq(1, 1 << -e)


class ConstName(enum.Enum):
    """The fixed basis of named real constants, in canonical display order."""

    ONE = "1"
    SQRT2 = "sqrt2"
    PI = "pi"
    PI_SQ = "pi^2"
    LN2 = "ln2"
    LN_1P_SQRT2 = "ln(1+sqrt2)"
    PI_SQRT2 = "pi*sqrt2"
    PI_LN2 = "pi*ln2"
    PI_LN_1P_SQRT2 = "pi*ln(1+sqrt2)"

    @property
    def symbol(self) -> str:
        return self.value


_ORDER = {name: i for i, name in enumerate(ConstName)}
_ALGEBRAIC = (ConstName.ONE, ConstName.SQRT2)

# linear maps used by closed-form constructors; anything absent is unsupported
_TIMES_SQRT2 = {
    ConstName.ONE: (ConstName.SQRT2, 1),
    ConstName.SQRT2: (ConstName.ONE, 2),
    ConstName.PI: (ConstName.PI_SQRT2, 1),
    ConstName.PI_SQRT2: (ConstName.PI, 2),
}
_OVER_PI = {
    ConstName.PI: ConstName.ONE,
    ConstName.PI_SQ: ConstName.PI,
    ConstName.PI_SQRT2: ConstName.SQRT2,
    ConstName.PI_LN2: ConstName.LN2,
    ConstName.PI_LN_1P_SQRT2: ConstName.LN_1P_SQRT2,
}
_TIMES_PI = {v: k for k, v in _OVER_PI.items()}


class ConstVec:
    """Exact Q-linear combination of the basis constants.

    Instances are immutable and canonical: coefficients are stored in basis
    order with zeros dropped, so ``==`` is structural equality.  Scaling by a
    rational is the only product; there is deliberately no ConstVec x
    ConstVec multiplication.

    >>> v = ConstVec({ConstName.ONE: 2, ConstName.SQRT2: -1})
    >>> str(v)
    '2 - sqrt2'
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, coeffs: Mapping[ConstName, RationalLike] | None = None):
        acc: dict[ConstName, mpq] = {}
        for name, q in (coeffs or {}).items():
            if not isinstance(name, ConstName):
                name = ConstName[name]
            acc[name] = acc.get(name, mpq(0)) + rational(q)
        self._items = tuple(
            sorted(((k, v) for k, v in acc.items() if v != 0), key=lambda kv: _ORDER[kv[0]])
        )
        self._hash = None

    @classmethod
    def _from_sorted(cls, items: Iterable[tuple[ConstName, mpq]]) -> ConstVec:
        obj = cls.__new__(cls)
        obj._items = tuple(items)
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, name: ConstName, q: RationalLike = 1) -> ConstVec:
        return cls({name: q})

    @classmethod
    def rational(cls, q: RationalLike) -> ConstVec:
        return cls({ConstName.ONE: q})

    def coeff(self, name: ConstName) -> mpq:
        for k, v in self._items:
            if k is name:
                return v
        return mpq(0)

    def items(self) -> tuple[tuple[ConstName, mpq], ...]:
        return self._items

    def support(self) -> frozenset[ConstName]:
        return frozenset(k for k, _ in self._items)

    def is_rational(self) -> bool:
        return self.support() <= {ConstName.ONE}

    def __iter__(self) -> Iterator[tuple[ConstName, mpq]]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ConstVec):
            return self._items == other._items
        if isinstance(other, (int, mpq, mpz, Fraction)):
            return self._items == ConstVec.rational(other)._items
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __add__(self, other: ConstVec | RationalLike) -> ConstVec:
        if not isinstance(other, ConstVec):
            if isinstance(other, float):
                return NotImplemented
            other = ConstVec.rational(other)
        acc = dict(self._items)
        for k, v in other._items:
            acc[k] = acc.get(k, mpq(0)) + v
        return ConstVec._from_sorted(
            sorted(((k, v) for k, v in acc.items() if v != 0), key=lambda kv: _ORDER[kv[0]])
        )

    __radd__ = __add__

    def __neg__(self) -> ConstVec:
        return ConstVec._from_sorted((k, -v) for k, v in self._items)

    def __sub__(self, other: ConstVec | RationalLike) -> ConstVec:
        if not isinstance(other, ConstVec):
            other = ConstVec.rational(other)
        return self + (-other)

    def __rsub__(self, other: RationalLike) -> ConstVec:
        return (-self) + other

    def __mul__(self, q: RationalLike) -> ConstVec:
        if isinstance(q, (ConstVec, float)):
            return NotImplemented
        q = rational(q)
        if q == 0:
            return ConstVec()
        return ConstVec._from_sorted((k, v * q) for k, v in self._items)

    __rmul__ = __mul__

    def __truediv__(self, q: RationalLike) -> ConstVec:
        if isinstance(q, (ConstVec, float)):
            return NotImplemented
        q = rational(q)
        if q == 0:
            raise ZeroDivisionError("ConstVec division by zero")
        return self * (1 / q)

    def times_sqrt2(self) -> ConstVec:
        """Multiply by sqrt(2); defined on ONE, SQRT2, PI and PI_SQRT2 components."""
        return self._remap(_TIMES_SQRT2, "sqrt2")

    def times_pi(self) -> ConstVec:
        mapping = {k: (v, 1) for k, v in _TIMES_PI.items()}
        return self._remap(mapping, "pi")

    def over_pi(self) -> ConstVec:
        mapping = {k: (v, 1) for k, v in _OVER_PI.items()}
        return self._remap(mapping, "1/pi")

    def _remap(self, mapping, label: str) -> ConstVec:
        out = {}
        for k, v in self._items:
            if k not in mapping:
                raise ValueError(f"{k.name} * {label} is outside the constant basis")
            target, factor = mapping[k]
            out[target] = out.get(target, mpq(0)) + v * factor
        return ConstVec(out)

    def __repr__(self) -> str:
        return f"ConstVec({str(self)!r})"

    def __str__(self) -> str:
        return format_constvec(self)


def constvec_add(a: ConstVec, b: ConstVec) -> ConstVec:
    return a + b


def constvec_scale(q: RationalLike, v: ConstVec) -> ConstVec:
    return v * q


ZERO = ConstVec()
ONE = ConstVec.constant(ConstName.ONE)
SQRT2 = ConstVec.constant(ConstName.SQRT2)
PI = ConstVec.constant(ConstName.PI)
PI_SQ = ConstVec.constant(ConstName.PI_SQ)
LN2 = ConstVec.constant(ConstName.LN2)
LN_1P_SQRT2 = ConstVec.constant(ConstName.LN_1P_SQRT2)
PI_SQRT2 = ConstVec.constant(ConstName.PI_SQRT2)
PI_LN2 = ConstVec.constant(ConstName.PI_LN2)
PI_LN_1P_SQRT2 = ConstVec.constant(ConstName.PI_LN_1P_SQRT2)


def _int_term(c: int, name: ConstName) -> str:
    if name is ConstName.ONE:
        return str(c)
    if c == 1:
        return name.symbol
    if c == -1:
        return "-" + name.symbol
    return f"{c}*{name.symbol}"


def format_constvec(v: ConstVec) -> str:
    """Canonical text: the algebraic part (1, sqrt2) over a common
    denominator, then each transcendental term separately, in basis order.

    >>> format_constvec(ConstVec({ConstName.ONE: '1/4', ConstName.PI_SQ: '1/16'}))
    '1/4 + pi^2/16'
    """
    if not v:
        return "0"
    pieces: list[str] = []
    alg = [(k, q) for k, q in v if k in _ALGEBRAIC]
    if alg:
        den = reduce(gmpy2.lcm, (q.denominator for _, q in alg), mpz(1))
        parts = [_int_term(int(q * den), k) for k, q in alg]
        inner = parts[0] + "".join(
            " - " + p[1:] if p.startswith("-") else " + " + p for p in parts[1:]
        )
        if den == 1:
            pieces.append(inner)
        elif len(parts) > 1:
            pieces.append(f"({inner})/{den}")
        else:
            pieces.append(f"{inner}/{den}")
    for k, q in v:
        if k in _ALGEBRAIC:
            continue
        num = _int_term(int(q.numerator), k)
        pieces.append(num if q.denominator == 1 else f"{num}/{q.denominator}")
    out = pieces[0]
    for p in pieces[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out
