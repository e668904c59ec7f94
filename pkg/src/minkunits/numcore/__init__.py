from .interval import (
    ComplexInterval,
    Interval,
    Sign,
    Verdict,
    certify_le,
    compare_le,
    decided_sign,
    interval_sign,
    interval_sum,
    strict_intervals,
    strict_mode_enabled,
)
from .poly import (
    as_fraction,
    poly_eval,
    poly_extended_gcd,
    poly_inverse_mod,
    poly_mulmod,
    rational_str,
)
from .precision import PrecisionPolicy, PrecisionTrace, escalate

__all__ = [
    "ComplexInterval",
    "Interval",
    "PrecisionPolicy",
    "PrecisionTrace",
    "Sign",
    "Verdict",
    "as_fraction",
    "certify_le",
    "compare_le",
    "decided_sign",
    "escalate",
    "interval_sign",
    "interval_sum",
    "poly_eval",
    "poly_extended_gcd",
    "poly_inverse_mod",
    "poly_mulmod",
    "rational_str",
    "strict_intervals",
    "strict_mode_enabled",
]
