import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from minkunits.errors import HypothesisViolated
from minkunits.matrixlab import (
    IntervalMatrix,
    box_search,
    certified_rank,
    check_cofactor_constancy,
    check_integer_point,
    check_minkowski_nonsingular,
    check_null_sign,
    interval_det,
    interval_solve,
    positive_integer_point,
)
from minkunits.numcore.interval import Interval, Sign, Verdict


def M(rows):
    return IntervalMatrix.from_values(rows)


def test_integer_point_examples():
    assert positive_integer_point(M([[1, 0], [0, 1]])).xi == (1, 1)
    A = M([[2, -1], [-1, 2]])
    # exhaustive confirmation over [-3, 3]^2 that (1, 1) is valid
    valid = [p for p in itertools.product(range(-3, 4), repeat=2) if 0 < 2 * p[0] - p[1] <= 3 and 0 < 2 * p[1] - p[0] <= 3]
    assert (1, 1) in valid
    assert check_integer_point(A, (1, 1))[0] is Verdict.HOLDS
    # the rounding iteration lands on (3, 3) at l = 2; the box search finds (1, 1)
    p = positive_integer_point(A)
    assert p.xi in valid and p.xi == (3, 3) and p.l == 2
    assert box_search(A).xi == (1, 1)
    assert positive_integer_point(M([["-0.44069"]])).xi == (-1,)


def test_integer_point_is_reverified():
    A = M([[3, -1, -1], [-1, 3, -1], [-1, -1, 3]])
    p = positive_integer_point(A)
    verdict, products, bounds = check_integer_point(A, p.xi)
    assert verdict is Verdict.HOLDS
    for m in range(3):
        assert products[m].sign() is Sign.POSITIVE


def test_integer_point_with_interval_entries():
    A = IntervalMatrix([[Interval.from_mid_rad("0.7", "1e-30"), Interval.from_mid_rad("-1.3", "1e-30")],
                        [Interval.from_mid_rad("-0.2", "1e-30"), Interval.from_mid_rad("2.1", "1e-30")]])
    p = positive_integer_point(A)
    assert check_integer_point(A, p.xi)[0] is Verdict.HOLDS


nonsingular = st.integers(1, 3).flatmap(
    lambda n: st.lists(st.lists(st.integers(-10, 10), min_size=n, max_size=n), min_size=n, max_size=n)
).filter(lambda r: sympy.Matrix(r).det() != 0)


@given(nonsingular)
def test_solver_agrees_with_box_search(rows):
    A = M(rows)
    p = positive_integer_point(A)
    assert check_integer_point(A, p.xi)[0] is Verdict.HOLDS
    q = box_search(A)
    assert check_integer_point(A, q.xi)[0] is Verdict.HOLDS


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=1, max_size=4)))
def test_certified_rank_matches_exact_elimination(rows):
    assert certified_rank(M(rows)).rank == sympy.Matrix(rows).rank()


@given(nonsingular)
def test_det_and_solve_enclose_exact(rows):
    A = M(rows)
    assert interval_det(A).contains(Fraction(int(sympy.Matrix(rows).det())))
    b = [1] * len(rows)
    x = interval_solve(A, b)
    ref = sympy.Matrix(rows).LUsolve(sympy.Matrix(b))
    for xi, r in zip(x, ref):
        assert xi.contains(Fraction(str(r)))


def test_rank_examples():
    assert certified_rank(M([[1, 0, 0], [0, 1, 0], [0, 0, 1]])).rank == 3
    assert certified_rank(M([[0, 0], [0, 0]])).rank == 0
    third = Interval.from_mid_rad(Fraction(1, 3), Fraction(1, 10**30))
    rc = certified_rank(IntervalMatrix([[third, -third], [-third, third]]), relations=1)
    assert rc.rank == 1


def test_minkowski_nonsingular_examples():
    assert check_minkowski_nonsingular(M([[1, "-0.5"], ["-0.5", 1]])).structural
    c = check_minkowski_nonsingular(M([[2, -1], [-1, 2]]))
    assert c.determinant.contains(3)
    with pytest.raises(HypothesisViolated):
        check_minkowski_nonsingular(M([[1, -2], [-2, 1]]))


@given(st.integers(2, 5).flatmap(lambda n: st.lists(st.lists(st.integers(1, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_structural_nonsingularity_implies_nonzero_det(offdiag):
    n = len(offdiag)
    rows = [[-offdiag[i][j] if i != j else 0 for j in range(n)] for i in range(n)]
    for j in range(n):
        rows[j][j] = sum(offdiag[i][j] for i in range(n) if i != j) + 1  # column sums are +1
    c = check_minkowski_nonsingular(M(rows))
    assert not c.determinant.contains_zero()
    assert sympy.Matrix(rows).det() != 0


def test_cofactor_and_null_sign_examples():
    A = M([[1, -1], [-1, 1]])
    c = check_cofactor_constancy(A)
    assert c.mode == "full" and c.nonzero
    assert all(x.contains(1) for r in c.cofactors for x in r)
    ns = check_null_sign(A)
    assert ns.sign is Sign.POSITIVE
    assert all(x.contains(1) for x in ns.vector)


def test_zero_row_gives_degenerate_branch():
    A = M([[0, 0, 0], [0, 1, -1], [0, -1, 1]])
    c = check_cofactor_constancy(A)
    assert not c.nonzero
    assert all(x.contains_zero() for r in c.cofactors for x in r)
    assert certified_rank(A).rank < 2


@given(st.integers(2, 5).flatmap(lambda n: st.lists(st.lists(st.integers(1, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_null_vector_is_a_constant_sign_kernel_vector(offdiag):
    n = len(offdiag)
    rows = [[-offdiag[i][j] if i != j else 0 for j in range(n)] for i in range(n)]
    for j in range(n):
        rows[j][j] = sum(offdiag[i][j] for i in range(n) if i != j)  # column sums are 0
    A = M(rows)
    ns = check_null_sign(A)
    assert ns.sign in (Sign.POSITIVE, Sign.NEGATIVE)
    for r in A.matvec(ns.vector):
        assert r.contains_zero()
    cc = check_cofactor_constancy(A)
    assert cc.nonzero and certified_rank(A, relations=1).rank == n - 1
