"""Dense univariate polynomials over the rationals.

A polynomial is a tuple of ``Fraction`` coefficients, lowest degree first,
with no trailing zeros.  The zero polynomial is the empty tuple.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import NotInvertible

Poly = tuple  # tuple[Fraction, ...]


def as_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not a rational: {value!r}")


def rational_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def normalize(coeffs: Iterable) -> Poly:
    c = [as_fraction(a) for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p: Poly) -> int:
    return len(p) - 1  # -1 for the zero polynomial


def poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return normalize(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def poly_neg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def poly_sub(a: Poly, b: Poly) -> Poly:
    return poly_add(a, poly_neg(b))


def poly_scale(a: Poly, c) -> Poly:
    c = as_fraction(c)
    return normalize(x * c for x in a)


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return normalize(out)


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db, lead = len(b) - 1, b[-1]
    if len(r) - 1 < db:
        return (), normalize(r)
    q = [Fraction(0)] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] / lead
        if c:
            q[k - db] = c
            for j in range(db + 1):
                r[k - db + j] -= c * b[j]
    return normalize(q), normalize(r[:db])


def poly_mod(a: Poly, m: Poly) -> Poly:
    return poly_divmod(a, m)[1]


def poly_mulmod(a: Poly, b: Poly, m: Poly) -> Poly:
    return poly_mod(poly_mul(a, b), m)


def poly_eval(p: Poly, x):
    """Horner evaluation; ``x`` may be any ring-like value (Fraction, Interval, ...)."""
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_compose_mod(p: Poly, q: Poly, m: Poly) -> Poly:
    """p(q(x)) reduced mod m."""
    acc: Poly = ()
    for c in reversed(p):
        acc = poly_add(poly_mulmod(acc, q, m), (c,) if c else ())
    return acc


def poly_derivative(p: Poly) -> Poly:
    return normalize(i * p[i] for i in range(1, len(p)))


def monic(p: Poly) -> Poly:
    return poly_scale(p, 1 / p[-1]) if p else p


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, poly_mod(a, b)
    return monic(a)


def poly_extended_gcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g and g monic."""
    r0, r1 = a, b
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1))
    if not r0:
        return (), (), ()
    lead = r0[-1]
    return monic(r0), poly_scale(s0, 1 / lead), poly_scale(t0, 1 / lead)


def poly_inverse_mod(a: Poly, m: Poly) -> Poly:
    g, s, _ = poly_extended_gcd(poly_mod(a, m), m)
    if g != (Fraction(1),):
        raise NotInvertible("element shares a factor with the modulus")
    return poly_mod(s, m)


def is_squarefree(p: Poly) -> bool:
    return degree(poly_gcd(p, poly_derivative(p))) == 0


def rational_roots(p: Sequence[int]) -> list[Fraction]:
    """Rational roots of an integer polynomial (rational root theorem)."""
    p = normalize(p)
    if not p:
        raise ValueError("zero polynomial")
    roots = []
    shift = 0
    while p[shift] == 0:
        shift += 1
    if shift:
        roots.append(Fraction(0))
    a0, an = abs(int(p[shift])), abs(int(p[-1]))
    for num in _divisors(a0):
        for den in _divisors(an):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in roots and poly_eval(p, cand) == 0:
                    roots.append(cand)
    return sorted(roots)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def discriminant_abs(p: Poly) -> Fraction:
    """|disc(p)| for monic p, via the resultant with p'."""
    from .exact import resultant

    n = degree(p)
    return abs(resultant(p, poly_derivative(p))) / abs(p[-1]) if n > 0 else Fraction(0)
