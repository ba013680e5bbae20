"""Exact closed forms and numerical verification for series involving ratios
of central binomial coefficients.

The package is organised in layers: exact arithmetic (:mod:`cbseries.exact`),
high-precision numerics (:mod:`cbseries.numerics`), a first-order recurrence
solver (:mod:`cbseries.recurrence`), closed forms of the underlying integrals
(:mod:`cbseries.closed_forms`), the identity registry (:mod:`cbseries.catalog`)
and the verification engine (:mod:`cbseries.verify`).
"""

from __future__ import annotations

from .catalog import (
    DEFAULT_REGISTRY,
    GFIdentity,
    Param,
    Registry,
    SeriesIdentity,
    catalog_list,
    default_sweep,
    get_entry,
    rhs_closed,
    term_at,
)
from .closed_forms import (
    INTEGRALS,
    closed_B,
    closed_F,
    closed_I,
    closed_K,
    closed_omega,
    closed_phi_even,
    closed_phi_odd,
    closed_wp,
    nu_pair,
    recurrence_for,
    wallis_sin,
)
from .errors import (
    CbseriesError,
    DecayTooSlow,
    DomainError,
    NonConvergence,
    NumericalBreakdown,
    NumericOnlyRHS,
    ParamOutOfDomain,
    UnknownIdentity,
    ZeroCoefficient,
)
from .exact import (
    ConstName,
    ConstVec,
    Rational,
    binomial,
    central_binomial,
    constvec_add,
    constvec_scale,
    factorial,
    format_constvec,
    pochhammer,
    rational,
)
from .numerics import (
    elementary,
    eval_const,
    eval_constvec,
    tail_fit,
    tanh_sinh_integrate,
    to_bigfloat,
    working_digits,
    wynn_epsilon,
)
from .recurrence import RecurrenceSpec, solve_affine_form, solve_closed, solve_iterative
from .verify import VerificationReport, verify_all, verify_gf, verify_series

__version__ = "0.1.0"

_SUBMODULES = {"annotations", "catalog", "cli", "closed_forms", "errors", "exact", "numerics", "recurrence", "verify"}
__all__ = [name for name in dir() if not name.startswith("_") and name not in _SUBMODULES]
