import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minkunits.errors import CaseViolation, NotNormal
from minkunits.galois import cyclic_group, direct_product, symmetric_group
from minkunits.groupfunc import (
    CosetFunction,
    act,
    build_lambda,
    coset_setting,
    function_rank,
    hk_coset_sums,
    independent_translates,
    lattice_basis,
    lattice_membership,
    mu_matrix_check,
)

C2 = cyclic_group(2)
V4 = direct_product(C2, C2)
C4 = cyclic_group(4)
C6 = cyclic_group(6)
S3 = symmetric_group(3)
GROUPS = {"C2xC2": V4, "C4": C4, "C6": C6, "S3": S3}


def valid_pairs(G):
    for H in G.subgroups:
        if not G.is_normal(H):
            continue
        for K in G.subgroups:
            if set(K) <= set(H) or G.intersection(H, K) == (0,):
                yield H, K


def test_act_axioms_exhaustive_on_klein_group():
    K = (0,)
    f = CosetFunction(V4, K, [3, -1, 0, 2])
    assert act(0, f) == f
    for g1, g2 in itertools.product(V4.elements, repeat=2):
        assert act(g1, act(g2, f)) == act(V4.mul(g1, g2), f)


def test_lambda_examples():
    H = (0, 1)
    lam = build_lambda(V4, H, (0,))
    assert lam(0) == 1 and lam(1) == -1 and lam(2) == 0 and lam(3) == 0
    # C4 with H = G and K = {1, g^2}: J = 2
    lam4 = build_lambda(C4, (0, 1, 2, 3), (0, 2))
    assert lam4(0) == 1 and lam4(2) == 1 and lam4(1) == -1 and lam4(3) == -1
    assert lam4.l1_norm() == 2


def test_lambda_hk_values_permuted_by_h():
    H = (0, 1)
    lam = build_lambda(V4, H, (0,))
    for h in H:
        moved = act(h, lam)
        assert sorted(moved(x) for x in H) == sorted(lam(x) for x in H)
        assert all(moved(x) == 0 for x in V4.elements if x not in H)


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_lambda_properties_all_pairs(name):
    G = GROUPS[name]
    for H, K in valid_pairs(G):
        S = coset_setting(G, H, K)
        lam = build_lambda(G, H, K)
        assert lam.l1_norm() == 2 * (S.J - 1)
        assert lattice_membership(lam, H, K)
        ones = CosetFunction.from_callable(G, K, lambda g: 1)
        assert not lattice_membership(ones, H, K)
        assert hk_coset_sums(ones, H, K) == [S.J] * S.I
        for g in G.elements:
            assert lattice_membership(act(g, lam), H, K)
        basis = lattice_basis(H, K, G)
        assert function_rank(basis) == S.N - S.I
        for f in basis:
            for g in G.elements:
                assert lattice_membership(act(g, f), H, K)
        tr = independent_translates(lam, S)
        assert tr.rank == S.N - S.I and tr.supports_ok


@pytest.mark.parametrize("name", sorted(GROUPS))
def test_mu_matrix_dependency_has_constant_sign(name):
    G = GROUPS[name]
    for H, K in valid_pairs(G):
        S = coset_setting(G, H, K)
        if S.J < 2:
            continue
        mu = mu_matrix_check(build_lambda(G, H, K), S)
        assert mu.subsets_independent
        assert all((x > 0) == (mu.dependency_sign > 0) and x != 0 for x in mu.dependency)


def test_degenerate_J1_has_no_translates():
    S = coset_setting(V4, (0,), (0, 1))
    assert S.J == 1
    assert independent_translates(build_lambda(V4, (0,), (0, 1)), S).rank == 0


def test_case_and_normality_violations():
    order2 = next(S for S in S3.subgroups if len(S) == 2)
    with pytest.raises(NotNormal):
        build_lambda(S3, order2, (0,))
    # H ∩ K = H is nontrivial and K is not inside H
    with pytest.raises(CaseViolation):
        build_lambda(V4, (0, 1), (0, 1, 2, 3))


functions = st.lists(st.integers(-5, 5), min_size=4, max_size=4)


@given(functions, functions, st.sampled_from(range(4)))
def test_action_is_linear(a, b, g):
    K = (0,)
    f1, f2 = CosetFunction(V4, K, a), CosetFunction(V4, K, b)
    assert act(g, f1 + f2) == act(g, f1) + act(g, f2)
    assert act(g, 3 * f1) == 3 * act(g, f1)
    assert (f1 - f1) == CosetFunction.zero(V4, K)
