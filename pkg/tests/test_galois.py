import itertools

import pytest

from minkunits.errors import MinkError, NotNormal, StructureViolation
from minkunits.field import NumberField
from minkunits.galois import FiniteGroup, cyclic_group, direct_product, recover_automorphisms, symmetric_group

EXPECTED = {"sqrt2": "C2", "sqrt3": "C2", "sqrt5": "C2", "biquad": "C2xC2", "zeta5": "C4", "zeta20": "C2xC4"}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_recovered_groups(fixtures, name):
    K = fixtures[name].field
    G = recover_automorphisms(K)
    assert G.order == K.degree
    assert G.structure == EXPECTED[name]
    assert G.check_associative()
    # each image is a root of the minimal polynomial, checked exactly
    for a in G.automorphisms:
        acc = K.zero
        for c in reversed(K.min_poly):
            acc = acc * a.image + K(c)
        assert acc.is_zero()
    # the table is composition: (σ_i ∘ σ_j)(α) = σ_i(σ_j(α))
    alpha = K.element(range(1, K.degree + 1))
    for i, j in itertools.product(G.elements, repeat=2):
        assert G.apply(G.mul(i, j), alpha) == G.apply(i, G.apply(j, alpha))


def test_automorphisms_are_ring_maps(fixtures):
    K = fixtures["biquad"].field
    G = recover_automorphisms(K)
    a, b = K.element([1, 2, 0, -1]), K.element([0, 1, 1, 3])
    for g in G.elements:
        assert G.apply(g, a * b) == G.apply(g, a) * G.apply(g, b)
        assert G.apply(g, a + b) == G.apply(g, a) + G.apply(g, b)


def test_fixed_by_subfield_generators(fixtures):
    fx = fixtures["biquad"]
    G = recover_automorphisms(fx.field)
    for gen in fx.subfields.values():
        H = G.fixed_by(gen)
        assert len(H) == 2 and G.is_normal(H)


def test_non_galois_field_rejected():
    with pytest.raises(MinkError):
        recover_automorphisms(NumberField((-2, 0, 0, 1), "cbrt2"))


@pytest.mark.parametrize(
    "G, structure, nsub",
    [
        (cyclic_group(4), "C4", 3),
        (direct_product(cyclic_group(2), cyclic_group(2)), "C2xC2", 5),
        (cyclic_group(6), "C6", 4),
        (symmetric_group(3), "S3", 6),
        (direct_product(cyclic_group(2), cyclic_group(4)), "C2xC4", 8),
    ],
)
def test_abstract_tables(G, structure, nsub):
    assert G.structure == structure
    assert G.check_associative()
    subs = G.subgroups
    assert len(subs) == nsub
    for S in subs:
        assert G.is_subgroup(S)
        cosets = G.left_cosets(S)
        assert sorted(g for c in cosets for g in c) == list(G.elements)
        T = G.left_transversal(S)
        assert T[0] == 0 and len(T) == G.order // len(S)


def test_normality_in_s3():
    S3 = symmetric_group(3)
    normal = [S for S in S3.subgroups if S3.is_normal(S)]
    assert sorted(len(S) for S in normal) == [1, 3, 6]
    order2 = next(S for S in S3.subgroups if len(S) == 2)
    with pytest.raises(NotNormal):
        S3.require_normal(order2)


def test_bad_tables():
    with pytest.raises(StructureViolation):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(StructureViolation):
        FiniteGroup([[1, 0], [0, 1]])
