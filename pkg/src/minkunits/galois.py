"""Finite groups given by tables, and exact recovery of Galois automorphisms."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .errors import NotNormal, PrecisionExhausted, StructureViolation, Undecided, VerificationFailed
from .field import FieldElement, NumberField
from .numcore.interval import ComplexInterval
from .numcore.poly import discriminant_abs, poly_compose_mod
from .numcore.precision import PrecisionPolicy, escalate
from .places import compute_places

Subgroup = tuple  # sorted tuple of element indices


class FiniteGroup:
    """A group on {0, ..., n-1} with ``table[i][j]`` = i*j and 0 the identity."""

    def __init__(self, table: Sequence[Sequence[int]], name: str = ""):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(self.table)
        self.order = n
        if any(len(row) != n for row in self.table):
            raise StructureViolation("group table is not square")
        if any(sorted(row) != list(range(n)) for row in self.table):
            raise StructureViolation("group table rows are not permutations")
        if any(sorted(col) != list(range(n)) for col in zip(*self.table)):
            raise StructureViolation("group table columns are not permutations")
        if self.table[0] != tuple(range(n)) or any(self.table[i][0] != i for i in range(n)):
            raise StructureViolation("element 0 is not the identity")
        self._inv = tuple(row.index(0) for row in self.table)
        for i in range(n):
            if self.table[self._inv[i]][i] != 0:
                raise StructureViolation("left and right inverses differ")
        self.name = name

    def check_associative(self) -> bool:
        t = self.table
        n = self.order
        return all(t[t[a][b]][c] == t[a][t[b][c]] for a in range(n) for b in range(n) for c in range(n))

    # -- elementwise ----------------------------------------------------
    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self._inv[a]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in self.elements for b in self.elements)

    # -- subgroups ----------------------------------------------------
    def generate(self, gens: Iterable[int]) -> Subgroup:
        sub = {0}
        frontier = set(gens) - sub
        sub |= frontier
        while frontier:
            new = {self.mul(a, b) for a in sub for b in frontier} | {self.mul(b, a) for a in sub for b in frontier}
            frontier = new - sub
            sub |= frontier
        return tuple(sorted(sub))

    def is_subgroup(self, S: Iterable[int]) -> bool:
        S = set(S)
        return 0 in S and all(self.mul(a, self.inverse(b)) in S for a in S for b in S)

    @functools.cached_property
    def subgroups(self) -> tuple[Subgroup, ...]:
        found = {(0,)}
        frontier = {(0,)}
        while frontier:
            nxt = set()
            for S in frontier:
                for g in self.elements:
                    if g not in S:
                        T = self.generate(S + (g,))
                        if T not in found:
                            nxt.add(T)
            found |= nxt
            frontier = nxt
        return tuple(sorted(found, key=lambda s: (len(s), s)))

    def is_normal(self, H: Iterable[int]) -> bool:
        H = set(H)
        return all(self.mul(self.mul(g, h), self.inverse(g)) in H for g in self.elements for h in H)

    def require_normal(self, H) -> None:
        if not self.is_normal(H):
            raise NotNormal(f"subgroup {tuple(H)} is not normal")

    def left_coset(self, g: int, K: Iterable[int]) -> tuple[int, ...]:
        return tuple(sorted(self.mul(g, k) for k in K))

    def left_cosets(self, K: Iterable[int], within: Iterable[int] | None = None) -> list[tuple[int, ...]]:
        """Left cosets gK for g in ``within`` (default: the whole group), in canonical order."""
        K = tuple(K)
        seen, cosets = set(), []
        for g in sorted(within if within is not None else self.elements):
            if g not in seen:
                c = self.left_coset(g, K)
                seen |= set(c)
                cosets.append(c)
        return cosets

    def left_transversal(self, K: Iterable[int], within: Iterable[int] | None = None) -> tuple[int, ...]:
        """Canonical transversal: the smallest index of each left coset, ascending."""
        return tuple(c[0] for c in self.left_cosets(K, within))

    def coset_index(self, K: Iterable[int], g: int, transversal: Sequence[int]) -> int:
        """Position in ``transversal`` of the representative of gK."""
        K = set(K)
        for i, t in enumerate(transversal):
            if self.mul(self.inverse(t), g) in K:
                return i
        raise StructureViolation("element not covered by transversal")

    def product_subgroup(self, H, K) -> Subgroup:
        self.require_normal(H)
        return tuple(sorted({self.mul(h, k) for h in H for k in K}))

    def intersection(self, H, K) -> Subgroup:
        return tuple(sorted(set(H) & set(K)))

    @functools.cached_property
    def structure(self) -> str:
        return describe_group(self)

    def __repr__(self):
        return f"{type(self).__name__}(order={self.order}, structure={self.structure})"


def _abelian_types(n: int):
    """Invariant factor lists d1 | d2 | ... with product n."""

    def rec(rest, smallest):
        if rest == 1:
            yield []
            return
        for d in range(smallest, rest + 1):
            if rest % d == 0:
                for tail in rec(rest // d, d):
                    if not tail or tail[0] % d == 0:
                        yield [d] + tail

    return list(rec(n, 2))


def _order_profile_of_abelian(factors) -> list[int]:
    counts: dict[int, int] = {}
    for combo in itertools.product(*[range(d) for d in factors]):
        o = 1
        for x, d in zip(combo, factors):
            o = math.lcm(o, d // math.gcd(x, d))
        counts[o] = counts.get(o, 0) + 1
    return sorted(counts.items())


def describe_group(G: FiniteGroup) -> str:
    n = G.order
    orders: dict[int, int] = {}
    for g in G.elements:
        o = G.element_order(g)
        orders[o] = orders.get(o, 0) + 1
    profile = sorted(orders.items())
    if G.is_abelian():
        for factors in _abelian_types(n) if n > 1 else [[1]]:
            if _order_profile_of_abelian(factors) == profile:
                return "x".join(f"C{d}" for d in factors)
        return f"abelian({n})"
    if n == 6:
        return "S3"
    if n == 8:
        return "D4" if orders.get(2, 0) == 5 else "Q8"
    if n == 2 * (n // 2) and orders.get(2, 0) == n // 2 + 1:
        return f"D{n // 2}"
    return f"G({n})"


# -- abstract tables used by the combinatorial tests ---------------------

def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], f"C{n}")


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    pairs = [(a, b) for a in A.elements for b in B.elements]
    index = {p: i for i, p in enumerate(pairs)}
    table = [[index[(A.mul(a1, a2), B.mul(b1, b2))] for (a2, b2) in pairs] for (a1, b1) in pairs]
    return FiniteGroup(table, f"{A.name}x{B.name}")


def symmetric_group(n: int) -> FiniteGroup:
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x)); identity sorts first
    table = [[index[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]
    return FiniteGroup(table, f"S{n}")


# -- Galois groups -------------------------------------------------------

@dataclass(frozen=True)
class Automorphism:
    """σ determined by σ(θ) = image."""

    image: FieldElement
    index: int

    def __call__(self, alpha: FieldElement) -> FieldElement:
        return alpha.substitute(self.image)


class GaloisGroup(FiniteGroup):
    def __init__(self, field: NumberField, automorphisms: Sequence[Automorphism]):
        self.field = field
        self.automorphisms = tuple(automorphisms)
        images = [a.image for a in self.automorphisms]
        lookup = {img.coeffs: i for i, img in enumerate(images)}
        if len(lookup) != len(images):
            raise VerificationFailed("automorphism images are not distinct")
        table = []
        for a in images:
            row = []
            for b in images:
                # (σ_a ∘ σ_b)(θ) = σ_a(q_b(θ)) = q_b(q_a(θ))
                c = b.substitute(a)
                if c.coeffs not in lookup:
                    raise VerificationFailed("automorphisms are not closed under composition")
                row.append(lookup[c.coeffs])
            table.append(row)
        super().__init__(table, "Gal")

    def automorphism(self, g: int) -> Automorphism:
        return self.automorphisms[g]

    def apply(self, g: int, alpha: FieldElement) -> FieldElement:
        return alpha.substitute(self.automorphisms[g].image)

    def fixed_by(self, alpha: FieldElement) -> Subgroup:
        return tuple(g for g in self.elements if self.apply(g, alpha) == alpha)


def _relation(ctx, theta, root, d: int, maxcoeff: int):
    """Integer relation c_0 + c_1 θ + ... + c_{d-1} θ^{d-1} = c_d r, via PSLQ."""
    t = ctx.sqrt(2) + ctx.pi / 7  # generic real weight folds Re and Im into one vector
    powers = [theta**k for k in range(d)]
    vec = [ctx.re(z) + t * ctx.im(z) for z in powers] + [-(ctx.re(root) + t * ctx.im(root))]
    return ctx.pslq(vec, maxcoeff=maxcoeff, maxsteps=20000 + 200 * d * d)


def _attempt(field: NumberField, bits: int, bound: int) -> list[FieldElement] | None:
    places = compute_places(field, bits)
    boxes = places.root_boxes()
    ctx = mpmath.MPContext()
    ctx.prec = bits
    theta = ctx.mpc(ctx.mpf(boxes[0].real.mid), ctx.mpf(boxes[0].imag.mid))
    d = field.degree
    found = []
    for box in boxes:
        root = ctx.mpc(ctx.mpf(box.real.mid), ctx.mpf(box.imag.mid))
        rel = _relation(ctx, theta, root, d, bound)
        if rel is None or rel[-1] == 0:
            return None
        q = field.element([Fraction(c, rel[-1]) for c in rel[:-1]])
        # exact certificate: p(q(θ)) ≡ 0 mod p
        if poly_compose_mod(field.poly, q.poly, field.poly):
            return None
        found.append(q)
    return found


@functools.lru_cache(maxsize=32)
def recover_automorphisms(field: NumberField, policy: PrecisionPolicy = PrecisionPolicy()) -> GaloisGroup:
    """All automorphisms of a Galois field, each verified exactly.

    Coefficients of σ(θ) in the power basis are found as an integer relation
    between 1, θ, ..., θ^(d-1) and a conjugate root, then p(σ(θ)) ≡ 0 is
    checked in exact arithmetic.  Failures escalate the coefficient bound
    and the working precision.
    """
    base = max(10, math.isqrt(int(discriminant_abs(field.poly))) + 1)
    bounds = [base * 1000**k for k in range(4)]

    def run(bits):
        for bound in bounds:
            images = _attempt(field, bits, bound)
            if images is not None:
                return images
        raise Undecided("no verified automorphism images at this precision")

    try:
        images = escalate(run, PrecisionPolicy(max(policy.start, 128), policy.ceiling), stage="automorphisms")
    except PrecisionExhausted as exc:
        raise VerificationFailed(f"{field}: automorphisms not recovered ({exc}); is the field Galois?") from exc
    if len(set(q.coeffs for q in images)) != field.degree:
        raise VerificationFailed("recovered images are not distinct; the field may not be Galois")
    if not images[0] == field.theta:
        raise VerificationFailed("first image is not the identity")
    return GaloisGroup(field, [Automorphism(q, i) for i, q in enumerate(images)])
