from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from minkunits.errors import PrecisionExhausted, RawComparisonError, Undecided
from minkunits.numcore import exact, poly
from minkunits.numcore.interval import (
    ComplexInterval,
    Interval,
    Sign,
    Verdict,
    certify_le,
    compare_le,
    interval_sum,
    strict_intervals,
)
from minkunits.numcore.precision import PrecisionPolicy, PrecisionTrace, escalate

fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6)


def _mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


# -- intervals -------------------------------------------------------------

@given(fractions, fractions)
def test_interval_ops_enclose_exact_results(a, b):
    A, B = Interval.exact(a, 64), Interval.exact(b, 64)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)
    if b != 0:
        assert (A / B).contains(a / b)
    assert (-A).contains(-a)
    assert abs(A).contains(abs(a))


@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=1000))
def test_log_encloses_high_precision_value(q):
    L = Interval.exact(q, 80).log()
    with mpmath.workdps(60):
        ref = mpmath.log(_mp(q))
        assert L.lo <= ref <= L.hi
    assert L.width < mpmath.mpf(2) ** -70


def test_exact_third_is_tight():
    x = Interval.exact(Fraction(1, 3), 128)
    assert x.contains(Fraction(1, 3))
    assert x.width < mpmath.mpf(2) ** -126


def test_signs_and_compare():
    assert Interval.exact(2).sign() is Sign.POSITIVE
    assert Interval.exact(-2).sign() is Sign.NEGATIVE
    assert Interval.from_mid_rad(0, Fraction(1, 10)).sign() is Sign.UNDECIDED
    assert compare_le(Interval.exact(1), Interval.exact(2)) is Verdict.HOLDS
    assert compare_le(Interval.exact(3), Interval.exact(2)) is Verdict.FAILS
    assert compare_le(Interval.from_mid_rad(1, 1), Interval.exact(1)) is Verdict.TIGHT
    assert certify_le(1, Interval.exact(2))
    with pytest.raises(Undecided):
        certify_le(Interval.from_mid_rad(1, 1), 1)


def test_raw_comparisons_are_refused():
    a, b = Interval.exact(1), Interval.exact(2)
    with pytest.raises(RawComparisonError):
        a < b  # noqa: B015
    with pytest.raises(RawComparisonError):
        bool(a)


def test_strict_mode_forbids_float():
    a = Interval.exact(Fraction(1, 7))
    assert abs(float(a) - 1 / 7) < 1e-15
    with strict_intervals():
        with pytest.raises(RawComparisonError):
            float(a)
    float(a)


def test_division_by_zero_enclosure_is_undecided():
    with pytest.raises(Undecided):
        Interval.exact(1) / Interval.from_mid_rad(0, 1)
    with pytest.raises(Undecided):
        Interval.from_mid_rad(0, 1).log()


@given(fractions, st.fractions(min_value=0, max_value=10, max_denominator=100))
def test_json_roundtrip_is_a_superset(mid, rad):
    x = Interval.from_mid_rad(mid, rad, 128)
    back = Interval.from_json(x.to_json(), 256)
    assert back.contains(x)


def test_complex_interval_abs():
    z = ComplexInterval.exact(3, 4)
    assert z.abs().contains(5)
    assert z.log_abs().overlaps(Interval.exact(5).log())
    assert (z * z.conjugate()).real.contains(25)


def test_interval_sum():
    assert interval_sum([Interval.exact(Fraction(1, 3))] * 3).contains(1)


# -- escalation ------------------------------------------------------------

def test_escalate_doubles_until_decided():
    trace = PrecisionTrace()

    def fn(bits):
        if bits < 256:
            raise Undecided("need more")
        return bits

    assert escalate(fn, PrecisionPolicy(64, 1024), trace, stage="demo") == 256
    assert [e["bits"] for e in trace.events] == [64, 128, 256]
    assert [e["outcome"] for e in trace.events] == ["undecided", "undecided", "decided"]


def test_escalate_exhausts():
    with pytest.raises(PrecisionExhausted):
        escalate(lambda bits: (_ for _ in ()).throw(Undecided("never")), PrecisionPolicy(64, 256))


def test_policy_validation():
    with pytest.raises(ValueError):
        PrecisionPolicy(128, 64)
    assert list(PrecisionPolicy(64, 512).schedule()) == [64, 128, 256, 512]


# -- exact rational algebra, against sympy ---------------------------------

small = st.integers(min_value=-9, max_value=9)
square = st.integers(min_value=1, max_value=4).flatmap(
    lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)
)
rect = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda s: st.lists(st.lists(small, min_size=s[1], max_size=s[1]), min_size=s[0], max_size=s[0])
)


@given(square)
def test_det_matches_sympy(rows):
    assert exact.det(rows) == sympy.Matrix(rows).det()


@given(rect)
def test_rank_and_nullspace_match_sympy(rows):
    M = sympy.Matrix(rows)
    assert exact.rank(rows) == M.rank()
    ns = exact.nullspace(rows)
    assert len(ns) == len(M.nullspace())
    for v in ns:
        assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows)


@given(square)
def test_charpoly_matches_sympy(rows):
    lam = sympy.Symbol("t")
    ref = sympy.Poly(sympy.Matrix(rows).charpoly(lam).as_expr(), lam).all_coeffs()
    assert list(exact.charpoly(rows)) == [Fraction(int(c)) for c in reversed(ref)]


@given(square)
def test_solve_roundtrip(rows):
    if exact.det(rows) == 0:
        return
    b = list(range(1, len(rows) + 1))
    x = exact.solve(rows, b)
    assert [sum(Fraction(a) * c for a, c in zip(r, x)) for r in rows] == b


def test_resultant_matches_sympy():
    x = sympy.Symbol("x")
    p, q = (Fraction(-2), Fraction(0), Fraction(1)), (Fraction(1), Fraction(1))
    assert exact.resultant(p, q) == sympy.resultant(x**2 - 2, x + 1, x)


# -- polynomials -------------------------------------------------------------

polys = st.lists(st.integers(-6, 6), min_size=1, max_size=6).map(poly.normalize)


@given(polys, polys)
def test_divmod_identity(a, b):
    if poly.degree(b) < 0:
        return
    q, r = poly.poly_divmod(a, b)
    assert poly.poly_add(poly.poly_mul(q, b), r) == poly.normalize(a)
    assert poly.degree(r) < poly.degree(b)


def test_inverse_mod_and_gcd():
    m = poly.normalize([-2, 0, 1])
    a = poly.normalize([1, 1])
    inv = poly.poly_inverse_mod(a, m)
    assert poly.poly_mulmod(a, inv, m) == poly.normalize([1])
    assert poly.poly_gcd(poly.normalize([-1, 0, 1]), poly.normalize([1, 1])) == poly.normalize([1, 1])


def test_rational_roots_and_squarefree():
    assert poly.rational_roots([-6, 1, 1]) == [Fraction(-3), Fraction(2)]
    assert not poly.is_squarefree(poly.normalize([1, 2, 1]))
    assert poly.is_squarefree(poly.normalize([-2, 0, 1]))
