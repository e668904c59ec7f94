"""Real and complex interval arithmetic with rigorous outward rounding.

Values are exposed in midpoint-radius form (``mid``, ``rad``) but stored as a
pair of binary endpoints; every operation goes through mpmath's ``libmp``
interval kernels, which take the working precision as an argument and round
each endpoint in the safe direction.  Nothing here touches a global mpmath
context, so all values are immutable and operations are re-entrant.

Intervals deliberately refuse ordering comparisons and, inside a strict
region (see :func:`strict_intervals`), refuse conversion to ``float``.  Any
decision must go through :func:`interval_sign` or :func:`compare_le`.
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import os
from decimal import ROUND_CEILING, Decimal, localcontext
from fractions import Fraction
from numbers import Rational

import mpmath
from mpmath import libmp as L

from ..errors import RawComparisonError, Undecided

_STRICT = contextvars.ContextVar(
    "minkunits_strict_intervals",
    default=os.environ.get("MINKUNITS_STRICT_INTERVALS", "") not in ("", "0"),
)


@contextlib.contextmanager
def strict_intervals(enabled=True):
    """Forbid ``float(interval)`` for the duration of the block."""
    token = _STRICT.set(enabled)
    try:
        yield
    finally:
        _STRICT.reset(token)


def strict_mode_enabled() -> bool:
    return _STRICT.get()


class Sign(enum.Enum):
    NEGATIVE = -1
    UNDECIDED = 0
    POSITIVE = 1


class Verdict(enum.Enum):
    """Outcome of a non-strict inequality ``a <= b`` between enclosures."""

    HOLDS = "holds"
    FAILS = "fails"
    TIGHT = "tight"  # enclosures overlap: equality not excluded, violation not shown


def _raw(value, prec, rnd):
    if isinstance(value, int):
        return L.from_int(value, prec, rnd)
    if isinstance(value, Fraction):
        return L.from_rational(value.numerator, value.denominator, prec, rnd)
    if isinstance(value, Rational):
        return L.from_rational(int(value.numerator), int(value.denominator), prec, rnd)
    if isinstance(value, mpmath.mpf):
        return L.mpf_pos(value._mpf_, prec, rnd)
    if isinstance(value, str):
        return L.from_str(value, prec, rnd)
    if isinstance(value, float):
        return L.from_float(value, prec, rnd)
    raise TypeError(f"cannot convert {type(value).__name__} to an interval endpoint")


def _mpf(raw) -> mpmath.mpf:
    # make_mpf wraps the raw value without rounding to the global precision
    return mpmath.mp.make_mpf(raw)


class Interval:
    """A closed real interval [lo, hi] carried at ``prec`` bits."""

    __slots__ = ("_lo", "_hi", "prec")

    def __init__(self, lo_raw, hi_raw, prec: int):
        self._lo = lo_raw
        self._hi = hi_raw
        self.prec = int(prec)

    # -- construction -------------------------------------------------
    @classmethod
    def exact(cls, value, prec: int = 128) -> "Interval":
        """Tightest enclosure of an exact rational (or decimal string)."""
        if isinstance(value, Interval):
            return value
        return cls(_raw(value, prec, "f"), _raw(value, prec, "c"), prec)

    @classmethod
    def from_mid_rad(cls, mid, rad=0, prec: int = 128) -> "Interval":
        m_lo, m_hi = _raw(mid, prec, "f"), _raw(mid, prec, "c")
        r = _raw(rad, prec, "c")
        if r[0] == 1 and r != L.fzero:
            raise ValueError("radius must be nonnegative")
        return cls(L.mpf_sub(m_lo, r, prec, "f"), L.mpf_add(m_hi, r, prec, "c"), prec)

    @classmethod
    def from_endpoints(cls, lo, hi, prec: int = 128) -> "Interval":
        lo_raw, hi_raw = _raw(lo, prec, "f"), _raw(hi, prec, "c")
        if L.mpf_gt(lo_raw, hi_raw):
            raise ValueError("empty interval")
        return cls(lo_raw, hi_raw, prec)

    @classmethod
    def hull(cls, items) -> "Interval":
        items = list(items)
        lo, hi = items[0]._lo, items[0]._hi
        prec = max(x.prec for x in items)
        for x in items[1:]:
            if L.mpf_lt(x._lo, lo):
                lo = x._lo
            if L.mpf_gt(x._hi, hi):
                hi = x._hi
        return cls(lo, hi, prec)

    # -- views --------------------------------------------------------
    @property
    def lo(self) -> mpmath.mpf:
        return _mpf(self._lo)

    @property
    def hi(self) -> mpmath.mpf:
        return _mpf(self._hi)

    @property
    def precision_bits(self) -> int:
        return self.prec

    @property
    def mid(self) -> mpmath.mpf:
        s = L.mpf_add(self._lo, self._hi, self.prec + 2, "n")
        return _mpf(L.mpf_shift(s, -1))

    @property
    def rad(self) -> mpmath.mpf:
        m = L.mpf_shift(L.mpf_add(self._lo, self._hi, self.prec + 2, "n"), -1)
        a = L.mpf_sub(self._hi, m, self.prec, "c")
        b = L.mpf_sub(m, self._lo, self.prec, "c")
        return _mpf(a if L.mpf_ge(a, b) else b)

    @property
    def width(self) -> mpmath.mpf:
        return _mpf(L.mpf_sub(self._hi, self._lo, self.prec, "c"))

    def center(self) -> mpmath.mpf:
        """Midpoint for heuristic candidate generation, never for decisions."""
        return self.mid

    def center_fraction(self) -> Fraction:
        """Exact rational midpoint, for heuristic use like :meth:`center`."""
        lo, hi = self.endpoints_fraction()
        return (lo + hi) / 2

    def endpoints_fraction(self) -> tuple[Fraction, Fraction]:
        lo, hi = L.to_rational(self._lo), L.to_rational(self._hi)
        return Fraction(int(lo[0]), int(lo[1])), Fraction(int(hi[0]), int(hi[1]))

    # -- predicates ---------------------------------------------------
    def contains(self, value) -> bool:
        if isinstance(value, Interval):
            return L.mpf_le(self._lo, value._lo) and L.mpf_ge(self._hi, value._hi)
        x_lo = _raw(value, self.prec + 64, "f")
        x_hi = _raw(value, self.prec + 64, "c")
        return L.mpf_le(self._lo, x_lo) and L.mpf_ge(self._hi, x_hi)

    def contains_zero(self) -> bool:
        return L.mpf_le(self._lo, L.fzero) and L.mpf_ge(self._hi, L.fzero)

    def overlaps(self, other: "Interval") -> bool:
        return L.mpf_le(self._lo, other._hi) and L.mpf_le(other._lo, self._hi)

    def is_point(self) -> bool:
        return self._lo == self._hi

    def is_exact_zero(self) -> bool:
        return self._lo == L.fzero and self._hi == L.fzero

    def sign(self) -> Sign:
        if L.mpf_gt(self._lo, L.fzero):
            return Sign.POSITIVE
        if L.mpf_lt(self._hi, L.fzero):
            return Sign.NEGATIVE
        return Sign.UNDECIDED

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        return Interval.exact(other, self.prec)

    def _pair(self, other):
        other = self._coerce(other)
        return (self._lo, self._hi), (other._lo, other._hi), max(self.prec, other.prec)

    def __add__(self, other):
        a, b, p = self._pair(other)
        return Interval(*L.mpi_add(a, b, p), p)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, p = self._pair(other)
        return Interval(*L.mpi_sub(a, b, p), p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        a, b, p = self._pair(other)
        return Interval(*L.mpi_mul(a, b, p), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.contains_zero():
            raise Undecided("interval division by an enclosure of zero")
        a, b, p = self._pair(other)
        return Interval(*L.mpi_div(a, b, p), p)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return Interval(L.mpf_neg(self._hi), L.mpf_neg(self._lo), self.prec)

    def __pos__(self):
        return self

    def __abs__(self):
        return Interval(*L.mpi_abs((self._lo, self._hi), self.prec), self.prec)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return 1 / (self ** (-n))
        return Interval(*L.mpi_pow_int((self._lo, self._hi), n, self.prec), self.prec)

    def square(self) -> "Interval":
        return self ** 2

    def sqrt(self) -> "Interval":
        if L.mpf_lt(self._lo, L.fzero):
            raise Undecided("square root of an interval reaching below zero")
        return Interval(*L.mpi_sqrt((self._lo, self._hi), self.prec), self.prec)

    def log(self) -> "Interval":
        if not L.mpf_gt(self._lo, L.fzero):
            raise Undecided("logarithm of an interval not certified positive")
        return Interval(*L.mpi_log((self._lo, self._hi), self.prec), self.prec)

    def exp(self) -> "Interval":
        return Interval(*L.mpi_exp((self._lo, self._hi), self.prec), self.prec)

    def with_precision(self, prec: int) -> "Interval":
        return Interval(L.mpf_pos(self._lo, prec, "f"), L.mpf_pos(self._hi, prec, "c"), prec)

    # -- guarded coercions ---------------------------------------------
    def __float__(self):
        if _STRICT.get():
            raise RawComparisonError("float() on an Interval inside a strict region")
        return float(self.mid)

    def __bool__(self):
        raise RawComparisonError("truth value of an Interval is not defined")

    def _no_order(self, other):
        raise RawComparisonError(
            "intervals are not ordered; use interval_sign() or compare_le()"
        )

    __lt__ = __le__ = __gt__ = __ge__ = _no_order

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self._lo == other._lo and self._hi == other._hi

    def __hash__(self):
        return hash((self._lo, self._hi))

    def __repr__(self):
        return f"Interval(mid={mpmath.nstr(self.mid, 20)}, rad={mpmath.nstr(self.rad, 3)})"

    # -- serialization ------------------------------------------------
    def to_json(self, digits: int = 40) -> dict:
        """Decimal midpoint plus a radius that still encloses the true interval.

        The decimal rounding error of the midpoint is folded into the radius,
        and the radius is rounded up, so the serialized ball is a superset.
        """
        lo, hi = self.endpoints_fraction()
        mid_exact = (lo + hi) / 2
        with localcontext() as ctx:
            ctx.prec = digits
            mid_dec = +Decimal(mid_exact.numerator) / Decimal(mid_exact.denominator)
        mid_frac = Fraction(mid_dec)
        rad_exact = max(hi - mid_frac, mid_frac - lo)
        with localcontext() as ctx:
            ctx.prec = 6
            ctx.rounding = ROUND_CEILING
            rad_dec = Decimal(rad_exact.numerator) / Decimal(rad_exact.denominator)
        return {"mid": str(mid_dec), "rad": str(rad_dec)}

    @classmethod
    def from_json(cls, data: dict, prec: int = 256) -> "Interval":
        mid = Fraction(Decimal(data["mid"]))
        rad = Fraction(Decimal(data["rad"]))
        return cls.from_endpoints(mid - rad, mid + rad, prec)


def interval_sign(x: Interval) -> Sign:
    """Positive iff lo > 0, Negative iff hi < 0, otherwise Undecided."""
    return x.sign()


def decided_sign(x: Interval, what: str = "value") -> Sign:
    """Like :func:`interval_sign` but escalates instead of returning Undecided."""
    s = x.sign()
    if s is Sign.UNDECIDED:
        raise Undecided(f"sign of {what} undecided: {x!r}")
    return s


def compare_le(a, b) -> Verdict:
    """Certified verdict for ``a <= b``; TIGHT when the enclosures overlap."""
    if not isinstance(a, Interval):
        a = Interval.exact(a, b.prec)
    if not isinstance(b, Interval):
        b = Interval.exact(b, a.prec)
    if L.mpf_le(a._hi, b._lo):
        return Verdict.HOLDS
    if L.mpf_gt(a._lo, b._hi):
        return Verdict.FAILS
    return Verdict.TIGHT


def certify_le(a, b, what: str = "inequality") -> bool:
    """True when ``a <= b`` is certified, False when refuted, Undecided otherwise."""
    v = compare_le(a, b)
    if v is Verdict.TIGHT:
        raise Undecided(f"{what}: enclosures overlap")
    return v is Verdict.HOLDS


class ComplexInterval:
    """Rectangular complex enclosure: real part times imaginary part."""

    __slots__ = ("real", "imag")

    def __init__(self, real: Interval, imag: Interval | None = None):
        self.real = real
        self.imag = imag if imag is not None else Interval.exact(0, real.prec)

    @classmethod
    def exact(cls, re, im=0, prec: int = 128) -> "ComplexInterval":
        return cls(Interval.exact(re, prec), Interval.exact(im, prec))

    @property
    def prec(self) -> int:
        return max(self.real.prec, self.imag.prec)

    def _coerce(self, other) -> "ComplexInterval":
        if isinstance(other, ComplexInterval):
            return other
        if isinstance(other, Interval):
            return ComplexInterval(other)
        return ComplexInterval(Interval.exact(other, self.prec))

    def __add__(self, other):
        o = self._coerce(other)
        return ComplexInterval(self.real + o.real, self.imag + o.imag)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return ComplexInterval(self.real - o.real, self.imag - o.imag)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return ComplexInterval(-self.real, -self.imag)

    def __mul__(self, other):
        o = self._coerce(other)
        if o.imag.is_exact_zero():
            return ComplexInterval(self.real * o.real, self.imag * o.real)
        if self.imag.is_exact_zero():
            return ComplexInterval(self.real * o.real, self.real * o.imag)
        return ComplexInterval(
            self.real * o.real - self.imag * o.imag,
            self.real * o.imag + self.imag * o.real,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "ComplexInterval":
        return ComplexInterval(self.real, -self.imag)

    def abs_squared(self) -> Interval:
        if self.imag.is_exact_zero():
            return self.real.square()
        return self.real.square() + self.imag.square()

    def abs(self) -> Interval:
        if self.imag.is_exact_zero():
            return abs(self.real)
        return self.abs_squared().sqrt()

    def log_abs(self) -> Interval:
        if self.imag.is_exact_zero():
            return abs(self.real).log()
        return self.abs_squared().log() * Fraction(1, 2)

    def contains_zero(self) -> bool:
        return self.real.contains_zero() and self.imag.contains_zero()

    def overlaps(self, other: "ComplexInterval") -> bool:
        return self.real.overlaps(other.real) and self.imag.overlaps(other.imag)

    def __repr__(self):
        return f"ComplexInterval({self.real!r}, {self.imag!r})"


def interval_sum(items, prec: int = 128) -> Interval:
    total = Interval.exact(0, prec)
    for x in items:
        total = total + x
    return total
