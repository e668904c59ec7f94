import mpmath
import pytest

import oracle
from minkunits.galois import recover_automorphisms
from minkunits.places import compute_places, fiber_over_subfield, place_action, stabilizer

SIGNATURE = {"sqrt2": (2, 0), "sqrt5": (2, 0), "biquad": (4, 0), "zeta5": (0, 2), "zeta20": (0, 4)}


@pytest.mark.parametrize("name", sorted(SIGNATURE))
def test_places_match_oracle_roots(fixtures, name):
    K = fixtures[name].field
    P = compute_places(K, 128)
    r1, r2 = SIGNATURE[name]
    assert P.N == r1 + r2
    assert sum(1 for p in P if p.is_real) == r1
    ref = oracle.places(K.min_poly)
    assert len(ref) == P.N
    with mpmath.workdps(50):
        tol = mpmath.mpf("1e-30")
        for root, _ in ref:
            near = [p for p in P if abs(p.root.real.mid - root.real) < tol and abs(p.root.imag.mid - root.imag) < tol]
            assert len(near) == 1


def test_place_ordering(fixtures):
    P = compute_places(fixtures["sqrt2"].field)
    assert P[0].root.real.sign().name == "POSITIVE"  # place 0 is +sqrt2
    Q = compute_places(fixtures["biquad"].field)
    mids = [p.root.real.mid for p in Q]
    assert mids == sorted(mids, reverse=True)
    for p in compute_places(fixtures["zeta5"].field):
        assert p.root.imag.sign().name == "POSITIVE"


@pytest.mark.parametrize("name", sorted(SIGNATURE))
def test_action_is_transitive_left_action(fixtures, name):
    K = fixtures[name].field
    G = recover_automorphisms(K)
    P = compute_places(K)
    A = place_action(G, P)
    for w in range(P.N):
        assert {A[g][w] for g in G.elements} == set(range(P.N))
        stab = stabilizer(G, P, w, A)
        assert len(stab) == (1 if P.totally_real else 2)
    for a in G.elements:
        for b in G.elements:
            for w in range(P.N):
                assert A[G.mul(a, b)][w] == A[a][A[b][w]]


def test_action_matches_embeddings(fixtures):
    """|σ(α)|_w = |α|_{σ⁻¹w}, cross-checked numerically for every σ and w."""
    K = fixtures["zeta20"].field
    G = recover_automorphisms(K)
    P = compute_places(K)
    A = place_action(G, P)
    alpha = K.element([2, 1, 0, 3, 0, 0, 1, 0])
    for g in G.elements:
        img = G.apply(g, alpha)
        for w in range(P.N):
            lhs = P.embed(img, w).abs()
            rhs = P.embed(alpha, A[G.inverse(g)][w]).abs()
            assert lhs.overlaps(rhs)


def test_fibers(fixtures):
    fx = fixtures["biquad"]
    G = recover_automorphisms(fx.field)
    P = compute_places(fx.field)
    for gen in fx.subfields.values():
        fib = fiber_over_subfield(P, gen, G, G.fixed_by(gen))
        assert len(fib) == 2 and all(len(f) == 2 for f in fib)
    fz = fixtures["zeta20"]
    Gz = recover_automorphisms(fz.field)
    Pz = compute_places(fz.field)
    assert len(fiber_over_subfield(Pz, fz.subfields["sqrt5"], Gz, Gz.fixed_by(fz.subfields["sqrt5"]))) == 2
    assert len(fiber_over_subfield(Pz, fz.subfields["i"], Gz, Gz.fixed_by(fz.subfields["i"]))) == 1


def test_refine_keeps_order(fixtures):
    P = compute_places(fixtures["biquad"].field, 64)
    Q = P.refine(256)
    for p, q in zip(P, Q):
        assert p.root.overlaps(q.root)
        assert q.root.real.width < p.root.real.width
