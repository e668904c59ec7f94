"""Number fields Q[x]/(p) with exact power-basis arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DivisionByZero, InvalidFixture, NotInvertible
from .numcore.exact import charpoly
from .numcore.poly import (
    as_fraction,
    is_squarefree,
    normalize,
    poly_compose_mod,
    poly_inverse_mod,
    poly_mod,
    poly_mul,
    rational_roots,
    rational_str,
)


@dataclass(frozen=True)
class NumberField:
    """The field Q(θ) where θ is a root of the monic integer polynomial ``min_poly``.

    Irreducibility is not proven; only the cheap necessary conditions are
    checked here (squarefree, no rational root).
    """

    min_poly: tuple
    label: str = ""

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.min_poly)
        if any(Fraction(c) != Fraction(o) for c, o in zip(coeffs, self.min_poly)):
            raise InvalidFixture("minimal polynomial must have integer coefficients")
        object.__setattr__(self, "min_poly", coeffs)
        if len(coeffs) < 3:
            raise InvalidFixture("degree must be at least 2")
        if coeffs[-1] != 1:
            raise InvalidFixture("minimal polynomial must be monic")
        if not is_squarefree(self.poly):
            raise InvalidFixture("minimal polynomial is not squarefree")
        if rational_roots(coeffs):
            raise InvalidFixture("minimal polynomial has a rational root")

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def poly(self) -> tuple:
        return normalize(self.min_poly)

    def element(self, coeffs: Iterable) -> "FieldElement":
        c = [as_fraction(x) for x in coeffs]
        if len(c) > self.degree:
            return FieldElement.from_poly(self, c)
        return FieldElement(self, tuple(c) + (Fraction(0),) * (self.degree - len(c)))

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            return value
        if isinstance(value, (int, Fraction, str)):
            return self.element([value])
        return self.element(value)

    @property
    def one(self) -> "FieldElement":
        return self.element([1])

    @property
    def zero(self) -> "FieldElement":
        return self.element([])

    @property
    def theta(self) -> "FieldElement":
        return self.element([0, 1])

    def __str__(self):
        return self.label or f"Q[x]/({_poly_str(self.poly)})"


class FieldElement:
    """Element of a NumberField in power-basis coordinates."""

    __slots__ = ("field", "coeffs", "__dict__")

    def __init__(self, field: NumberField, coeffs: Sequence[Fraction]):
        if len(coeffs) != field.degree:
            raise ValueError("coordinate vector has the wrong length")
        self.field = field
        self.coeffs = tuple(as_fraction(c) for c in coeffs)

    @classmethod
    def from_poly(cls, field: NumberField, poly) -> "FieldElement":
        r = poly_mod(normalize(poly), field.poly)
        return cls(field, tuple(r) + (Fraction(0),) * (field.degree - len(r)))

    @property
    def poly(self) -> tuple:
        return normalize(self.coeffs)

    # -- arithmetic ---------------------------------------------------
    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([other])
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return FieldElement.from_poly(self.field, poly_mul(self.poly, o.poly))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        try:
            return FieldElement.from_poly(self.field, poly_inverse_mod(self.poly, self.field.poly))
        except NotInvertible as exc:  # only possible for a reducible modulus
            raise InvalidFixture(f"minimal polynomial is reducible: {exc}") from exc

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.element([other])
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def substitute(self, image_of_theta: "FieldElement") -> "FieldElement":
        """The element a(q) for a = self as a polynomial in θ and q = image_of_theta."""
        return FieldElement.from_poly(
            self.field, poly_compose_mod(self.poly, image_of_theta.poly, self.field.poly)
        )

    # -- invariants ---------------------------------------------------
    def multiplication_matrix(self) -> list[list[Fraction]]:
        """Matrix of x -> self*x in the power basis (columns are images of θ^j)."""
        d = self.field.degree
        cols = []
        power = self.field.one
        for _ in range(d):
            cols.append((self * power).coeffs)
            power = power * self.field.theta
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    @cached_property
    def charpoly(self) -> tuple:
        return charpoly(self.multiplication_matrix())

    def norm(self) -> Fraction:
        cp = self.charpoly
        return cp[0] * (-1) ** self.field.degree

    def trace(self) -> Fraction:
        return -self.charpoly[-2]

    def is_integral(self) -> bool:
        # the characteristic polynomial is a power of the minimal polynomial,
        # so one has integer coefficients iff the other does (Gauss)
        return all(c.denominator == 1 for c in self.charpoly)

    def is_unit(self) -> bool:
        if self.is_zero() or not self.is_integral():
            return False
        return abs(self.norm()) == 1

    def is_torsion(self) -> bool:
        return self.torsion_order() is not None

    def torsion_order(self) -> int | None:
        """Smallest m with self**m == 1, or None when self is not a root of unity."""
        if self.is_zero():
            raise DivisionByZero("torsion test of zero")
        if not self.is_unit():
            return None
        for m in torsion_candidates(self.field.degree):
            if (self ** m).is_one():
                return m
        return None

    # -- display / io -------------------------------------------------
    def to_json(self) -> list[str]:
        return [rational_str(c) for c in self.coeffs]

    def __repr__(self):
        return f"FieldElement({_poly_str(self.poly, 'θ')})"

    def __str__(self):
        return _poly_str(self.poly, "θ")


def euler_phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def torsion_candidates(d: int) -> list[int]:
    """All m with φ(m) dividing d.  Since φ(m) >= sqrt(m/2), m <= 2d² suffices."""
    return [m for m in range(1, 2 * d * d + 1) if d % euler_phi(m) == 0]


def _poly_str(p, var="x") -> str:
    if not p:
        return "0"
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        mag = rational_str(abs(c))
        if i == 0:
            body = mag
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == "1" else f"{mag}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
