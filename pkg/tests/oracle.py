"""Independent numeric oracle built on sympy and mpmath only.

Nothing here imports minkunits.  Roots come from sympy's ``nroots`` at high
working precision; places are the real roots plus one representative of each
complex-conjugate pair, with local degree 1 or 2.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath
import sympy

DPS = 60
x = sympy.Symbol("x")


def _poly(min_poly):
    # coefficients are listed from the constant term upwards
    return sympy.Poly(list(reversed([int(c) for c in min_poly])), x)


@lru_cache(maxsize=None)
def roots(min_poly: tuple) -> tuple:
    rs = _poly(min_poly).nroots(n=DPS, maxsteps=500)
    with mpmath.workdps(DPS):
        return tuple(mpmath.mpc(str(sympy.re(r)), str(sympy.im(r))) for r in rs)


@lru_cache(maxsize=None)
def places(min_poly: tuple) -> tuple:
    """(root, local degree) pairs, one per archimedean place."""
    out = []
    with mpmath.workdps(DPS):
        tol = mpmath.mpf(10) ** (-DPS // 2)
        for r in roots(min_poly):
            if abs(r.imag) < tol:
                out.append((mpmath.mpc(r.real, 0), 1))
            elif r.imag > 0:
                out.append((r, 2))
    return tuple(out)


def evaluate(coeffs, z):
    with mpmath.workdps(DPS):
        acc = mpmath.mpc(0)
        for c in reversed([Fraction(c) for c in coeffs]):
            acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
        return acc


def log_abs_all(min_poly, coeffs) -> list:
    """log|alpha| at every place (not multiplied by the local degree)."""
    with mpmath.workdps(DPS):
        return [mpmath.log(abs(evaluate(coeffs, r))) for r, _ in places(tuple(min_poly))]


def height(min_poly, coeffs):
    """Absolute logarithmic Weil height of a unit."""
    d = len(min_poly) - 1
    with mpmath.workdps(DPS):
        logs = log_abs_all(min_poly, coeffs)
        return sum(abs(l) * dw for l, (_, dw) in zip(logs, places(tuple(min_poly)))) / (2 * d)


def regulator(min_poly, units) -> mpmath.mpf:
    """Standard regulator: |det| of d_w log|u_j|_w over all places but the last."""
    P = places(tuple(min_poly))
    n = len(P) - 1
    with mpmath.workdps(DPS):
        rows = []
        for i in range(n):
            rows.append([P[i][1] * log_abs_all(min_poly, u)[i] for u in units[:n]])
        return abs(mpmath.det(mpmath.matrix(rows))) if n else mpmath.mpf(1)


def norm(min_poly, coeffs) -> Fraction:
    """Exact absolute norm through a resultant."""
    p = _poly(min_poly)
    a = sympy.Poly(list(reversed([sympy.Rational(str(Fraction(c))) for c in coeffs])) or [0], x)
    r = sympy.resultant(p.as_expr(), a.as_expr(), x)
    lc = p.LC()
    return Fraction(str(sympy.nsimplify(r / lc ** a.degree())))
