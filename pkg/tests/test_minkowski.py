import functools

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from minkunits.context import field_context
from minkunits.errors import NotAUnit, StructureViolation
from minkunits.minkowski import (
    check_special,
    conjugate_subgroup_certificate,
    construct_special_unit,
    minkowski_matrix,
    verify_special,
)
from minkunits.numcore.interval import Sign, compare_le, Verdict

# special units produced by the construction and frozen here; each one is
# re-verified below against the sympy/mpmath oracle
FROZEN_BETA = {
    ("sqrt2", 0): ["1", "1"],
    ("sqrt2", 1): ["-1", "1"],
    ("sqrt3", 0): ["2", "1"],
    ("sqrt5", 0): ["0", "1"],
    ("biquad", 0): ["-9/4", "-3/4", "85/4", "27/4"],
    ("biquad", 1): ["-841/4", "-2643/4", "85/4", "267/4"],
    ("biquad", 2): ["-841/4", "2643/4", "85/4", "-267/4"],
    ("biquad", 3): ["-9/4", "3/4", "85/4", "-27/4"],
    ("zeta5", 0): ["1", "1", "0", "0"],
    ("zeta20", 0): ["-11", "0", "22", "21", "7", "13", "29", "21"],
}


def oracle_logs(fx, coeffs):
    """log|alpha| at each of our places, evaluated at the matching oracle root."""
    P = field_context(fx.field, 128).places
    ref = oracle.places(fx.field.min_poly)
    out = []
    with mpmath.workdps(50):
        for p in P:
            z = mpmath.mpc(p.root.real.mid, p.root.imag.mid)
            root = min(ref, key=lambda r: abs(r[0] - z))[0]
            out.append(mpmath.log(abs(oracle.evaluate(coeffs, root))))
    return out


@functools.lru_cache(maxsize=None)
def special(name, w):
    from minkunits import load_fixture

    fx = load_fixture(name)
    return fx, construct_special_unit(fx.units, w)


@pytest.mark.parametrize("key", sorted(FROZEN_BETA))
def test_construction_matches_frozen_and_oracle(key):
    fx, c = special(*key)
    assert c.beta.to_json() == FROZEN_BETA[key]
    assert c.beta.is_unit()
    logs = oracle_logs(fx, FROZEN_BETA[key])
    for w, lg in enumerate(logs):
        assert (lg > 0) == (w == key[1])
    # the certified sign checks agree with the oracle
    for w, enc, sign in c.sign_checks:
        assert sign == ("positive" if w == key[1] else "negative")
    assert compare_le(c.height, c.height_bound) is Verdict.HOLDS


def test_sqrt2_special_unit():
    fx, c = special("sqrt2", 0)
    assert c.xi == [-1]
    with mpmath.workdps(40):
        a = mpmath.log(1 + mpmath.sqrt(2)) / 2
        assert c.height.lo <= a <= c.height.hi
    M = c.matrix.matrix
    for (i, j), sgn in {(0, 0): 1, (0, 1): -1, (1, 0): -1, (1, 1): 1}.items():
        with mpmath.workdps(40):
            assert M[i, j].lo <= sgn * a <= M[i, j].hi
    assert c.matrix_rank.rank == 1
    _, c1 = special("sqrt2", 1)
    assert c1.beta == fx.field.element([-1, 1])
    assert [s for _, _, s in c1.sign_checks] == ["negative", "positive"]


def test_biquad_has_three_negative_places():
    _, c = special("biquad", 0)
    assert [s for _, _, s in c.sign_checks].count("negative") == 3
    assert c.matrix.null_sign.sign in (Sign.POSITIVE, Sign.NEGATIVE)
    assert all(not d.contains_zero() for _, _, d in c.matrix.minors)
    assert len(c.matrix.minors) == 16
    assert c.index.relation == [1, 1, 1, 1]
    assert c.index_bound_ok


@pytest.mark.parametrize("name", ["sqrt2", "biquad", "zeta5", "zeta20"])
def test_verify_special_examples(name):
    fx, c = special(name, 0)
    assert verify_special(c.beta).special
    assert not verify_special(c.beta.inverse()).special
    assert not verify_special(fx.field.one).special
    assert not verify_special(-fx.field.one).special


def test_verify_special_rejects_non_units(fixtures):
    with pytest.raises(NotAUnit):
        verify_special(fixtures["sqrt2"].field.element([3, 0]))


def test_matrix_requires_special(fixtures):
    with pytest.raises(StructureViolation):
        minkowski_matrix(fixtures["sqrt2"].units[0].inverse(), 0)


def test_complex_case_zeta5():
    fx, c = special("zeta5", 0)
    cp = c.matrix.complex_part
    assert cp["rho_beta_special"] and cp["beta_rho_beta_special"]
    ctx = field_context(fx.field, 128, 0)
    rb = ctx.apply(ctx.rho, c.beta)
    assert verify_special(rb).special
    assert verify_special(c.beta * rb).special
    assert c.matrix.row_sums is None


def test_diagonal_positive_everywhere():
    for key in FROZEN_BETA:
        _, c = special(*key)
        M = c.matrix.matrix
        n = M.shape[0]
        for i in range(n):
            for j in range(n):
                assert M[i, j].sign() is (Sign.POSITIVE if i == j else Sign.NEGATIVE)


def test_index_bound_sqrt2_near_equality():
    fx, c = special("sqrt2", 0)
    ic = conjugate_subgroup_certificate(c.beta, 0, fx.units)
    with mpmath.workdps(40):
        ref = mpmath.log(1 + mpmath.sqrt(2))
        assert ic.reg_B.lo <= ref <= ic.reg_B.hi
        assert ic.bound.lo <= ref <= ic.bound.hi
    assert ic.relative_index.contains(1)


def test_squared_units_scale_the_index():
    from minkunits import load_fixture

    fx = load_fixture("biquad")
    c1 = special("biquad", 0)[1]
    c2 = construct_special_unit([u * u for u in fx.units], 0)
    assert c2.xi == c1.xi
    assert c2.beta == c1.beta * c1.beta
    ratio = c2.index.reg_B / c1.index.reg_B
    assert ratio.contains(2 ** 3)
    # relative to the (also squared) unit system the index is unchanged
    assert c2.index.relative_index.overlaps(c1.index.relative_index)


exponents = st.lists(st.integers(-3, 3), min_size=3, max_size=3)


@given(exponents)
def test_direct_and_conjugate_forms_agree(e):
    from minkunits import load_fixture

    fx = load_fixture("biquad")
    alpha = fx.field.one
    for u, k in zip(fx.units, e):
        alpha = alpha * u**k
    if alpha.is_torsion():
        return
    ctx = field_context(fx.field, 128, 0)
    v = check_special(alpha, ctx)  # raises ConsistencyFailure on disagreement
    logs = oracle_logs(fx, alpha.to_json())
    assert bool(v) == all(lg < 0 for lg in logs[1:])


@given(st.integers(1, 4), st.integers(1, 4), st.sampled_from([0, 1, 2, 3]))
def test_special_units_form_a_semigroup(a, b, w):
    from minkunits import load_fixture

    fx = load_fixture("biquad")
    beta = special("biquad", w)[1].beta
    other = construct_special_unit(list(reversed(fx.units)), w).beta
    assert verify_special(beta**a * other**b, w).special


@given(st.integers(1, 3), st.integers(1, 3))
def test_semigroup_complex(a, b):
    beta = special("zeta20", 0)[1].beta
    ctx = field_context(beta.field, 128, 0)
    other = beta * ctx.apply(ctx.rho, beta)
    assert verify_special(beta**a * other**b, 0).special
