"""Exception hierarchy shared by all cbseries modules."""

from __future__ import annotations


class CbseriesError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CbseriesError, ValueError):
    """An argument lies outside the domain where a formula or function is defined."""


class ZeroCoefficient(CbseriesError, ZeroDivisionError):
    """A recurrence coefficient vanished at index ``k``."""

    def __init__(self, k: int, which: str = "a"):
        super().__init__(f"recurrence coefficient {which}({k}) is zero")
        self.k = k
        self.which = which


class NonConvergence(CbseriesError, ArithmeticError):
    """An iterative scheme exhausted its budget without meeting its target."""


class NumericalBreakdown(CbseriesError, ArithmeticError):
    """A denominator in a sequence transformation fell below working precision."""


class DecayTooSlow(CbseriesError, ArithmeticError):
    """Fitted power-law decay is too slow to estimate a series tail."""

    def __init__(self, alpha):
        super().__init__(f"fitted decay exponent {float(alpha):.4g} <= 1.2")
        self.alpha = alpha


class UnknownIdentity(CbseriesError, KeyError):
    def __init__(self, identity_id: str):
        super().__init__(identity_id)
        self.identity_id = identity_id

    def __str__(self) -> str:
        return f"unknown identity {self.identity_id!r}"


class ParamOutOfDomain(CbseriesError, ValueError):
    """Parameters for a catalog entry are missing or violate its constraints."""


class NumericOnlyRHS(CbseriesError, TypeError):
    """The right-hand side of an entry has no exact constant-vector form."""
