"""Integer functions on a finite group that are constant on left cosets of K.

Everything here is exact integer arithmetic.  A function is stored by its
values on the canonical left transversal of K (smallest element of each
coset, in ascending order), so two functions with the same (G, K) always
share one chart.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import CaseViolation, RankDeficient
from .galois import FiniteGroup, Subgroup
from .numcore import exact


class CosetFunction:
    """f: G/K -> Z, with ``values[i]`` = f on the coset of ``transversal[i]``."""

    __slots__ = ("group", "K", "transversal", "values", "_index")

    def __init__(self, group: FiniteGroup, K: Sequence[int], values: Sequence[int]):
        self.group = group
        self.K = tuple(sorted(K))
        self.transversal = group.left_transversal(self.K)
        if len(values) != len(self.transversal):
            raise ValueError(f"need {len(self.transversal)} values, got {len(values)}")
        self.values = tuple(int(v) for v in values)
        self._index = _coset_lookup(group, self.K, self.transversal)

    @classmethod
    def from_callable(cls, group: FiniteGroup, K, fn: Callable[[int], int]) -> "CosetFunction":
        K = tuple(sorted(K))
        reps = group.left_transversal(K)
        # reject functions that are not constant on cosets
        for r in reps:
            vals = {fn(x) for x in group.left_coset(r, K)}
            if len(vals) != 1:
                raise ValueError("function is not constant on a left coset of K")
        return cls(group, K, [fn(r) for r in reps])

    @classmethod
    def zero(cls, group: FiniteGroup, K) -> "CosetFunction":
        return cls(group, K, [0] * (group.order // len(K)))

    @classmethod
    def indicator(cls, group: FiniteGroup, K, i: int) -> "CosetFunction":
        n = group.order // len(K)
        return cls(group, K, [1 if j == i else 0 for j in range(n)])

    @property
    def N(self) -> int:
        return len(self.values)

    def __call__(self, g: int) -> int:
        return self.values[self._index[g]]

    def coset_of(self, g: int) -> int:
        return self._index[g]

    def _check(self, other: "CosetFunction"):
        if other.group is not self.group or other.K != self.K:
            raise ValueError("functions live on different coset spaces")

    def __add__(self, other: "CosetFunction") -> "CosetFunction":
        self._check(other)
        return CosetFunction(self.group, self.K, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "CosetFunction") -> "CosetFunction":
        self._check(other)
        return CosetFunction(self.group, self.K, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> "CosetFunction":
        return CosetFunction(self.group, self.K, [-a for a in self.values])

    def __rmul__(self, c: int) -> "CosetFunction":
        return CosetFunction(self.group, self.K, [c * a for a in self.values])

    def __eq__(self, other):
        if not isinstance(other, CosetFunction):
            return NotImplemented
        return self.group is other.group and self.K == other.K and self.values == other.values

    def __hash__(self):
        return hash((self.K, self.values))

    def l1_norm(self) -> int:
        return sum(abs(v) for v in self.values)

    def support(self) -> tuple[int, ...]:
        """Transversal positions where f is nonzero."""
        return tuple(i for i, v in enumerate(self.values) if v)

    def __repr__(self):
        return f"CosetFunction({dict(zip(self.transversal, self.values))})"


def _coset_lookup(group: FiniteGroup, K, reps) -> tuple[int, ...]:
    index = [0] * group.order
    for i, r in enumerate(reps):
        for x in group.left_coset(r, K):
            index[x] = i
    return tuple(index)


def act(g: int, f: CosetFunction) -> CosetFunction:
    """[g, f](x) = f(g⁻¹x)."""
    G = f.group
    ginv = G.inverse(g)
    return CosetFunction(G, f.K, [f(G.mul(ginv, x)) for x in f.transversal])


# -- the H, K setting --------------------------------------------------------

@dataclass(frozen=True)
class CosetSetting:
    """G with H normal and K such that H∩K = {1} or K ⊆ H, plus canonical transversals."""

    group: FiniteGroup
    H: Subgroup
    K: Subgroup
    HK: Subgroup
    s: tuple[int, ...]  # transversal of HK in G
    t: tuple[int, ...]  # transversal of K in HK
    case: str  # "trivial-intersection" or "K-in-H"

    @property
    def N(self) -> int:
        return self.group.order // len(self.K)

    @property
    def I(self) -> int:
        return len(self.s)

    @property
    def J(self) -> int:
        return len(self.t)


def coset_setting(G: FiniteGroup, H, K, t: Sequence[int] | None = None) -> CosetSetting:
    H, K = tuple(sorted(H)), tuple(sorted(K))
    if not G.is_subgroup(H) or not G.is_subgroup(K):
        raise ValueError("H and K must be subgroups")
    G.require_normal(H)
    inter = G.intersection(H, K)
    if set(K) <= set(H):
        case = "K-in-H"
    elif inter == (0,):
        case = "trivial-intersection"
    else:
        raise CaseViolation("need H ∩ K = {1} or K ⊆ H")
    HK = G.product_subgroup(H, K)
    s = G.left_transversal(HK)
    if t is None:
        t = G.left_transversal(K, within=HK)
    else:
        t = tuple(t)
        cosets = {G.left_coset(x, K) for x in t}
        if len(cosets) != len(t) or not all(set(c) <= set(HK) for c in cosets) or len(t) * len(K) != len(HK):
            raise CaseViolation("t is not a transversal of K in HK")
    return CosetSetting(G, H, K, HK, s, tuple(t), case)


def build_lambda(G: FiniteGroup, H, K) -> CosetFunction:
    """λ = J-1 on K, -1 on HK∖K, 0 off HK; membership in the lattice is verified."""
    S = coset_setting(G, H, K)
    HK, Kset = set(S.HK), set(S.K)

    def value(g):
        if g in Kset:
            return S.J - 1
        return -1 if g in HK else 0

    lam = CosetFunction.from_callable(G, S.K, value)
    if not lattice_membership(lam, S.H, S.K):
        raise RankDeficient("λ is not in the lattice (internal inconsistency)")
    return lam


def hk_coset_sums(f: CosetFunction, H, K) -> list[int]:
    """Σ_j f(s_i t_j) for each transversal element s_i of HK."""
    S = coset_setting(f.group, H, K)
    G = f.group
    return [sum(f(G.mul(si, tj)) for tj in S.t) for si in S.s]


def lattice_membership(f: CosetFunction, H, K) -> bool:
    return all(x == 0 for x in hk_coset_sums(f, H, K))


def lattice_basis(H, K, G: FiniteGroup) -> list[CosetFunction]:
    """Elementary basis e(s_i t_j) - e(s_i t_J), j < J, of the lattice; rank N - I."""
    S = coset_setting(G, H, K)
    out = []
    for si in S.s:
        last = CosetFunction.from_callable(G, S.K, _indicator_of(G, S.K, G.mul(si, S.t[-1])))
        for tj in S.t[:-1]:
            e = CosetFunction.from_callable(G, S.K, _indicator_of(G, S.K, G.mul(si, tj)))
            out.append(e - last)
    return out


def _indicator_of(G, K, rep):
    coset = set(G.left_coset(rep, K))
    return lambda x: 1 if x in coset else 0


def function_rank(functions: Sequence[CosetFunction]) -> int:
    if not functions:
        return 0
    return exact.rank([list(f.values) for f in functions])


@dataclass
class TranslatesCertificate:
    functions: list
    pairs: list  # (i, j) with the translate [s_i t_j, λ]
    elements: list  # s_i t_j
    rank: int
    expected: int
    supports_ok: bool

    def to_json(self) -> dict:
        return {
            "pairs": [list(p) for p in self.pairs],
            "elements": list(self.elements),
            "values": [list(f.values) for f in self.functions],
            "exact_rank": self.rank,
            "expected_rank": self.expected,
            "supports_ok": self.supports_ok,
        }


def default_J_sets(I: int, J: int) -> list[tuple[int, ...]]:
    """Drop the last transversal index in every block."""
    return [tuple(range(J - 1)) for _ in range(I)]


def independent_translates(
    lam: CosetFunction, S: CosetSetting, J_sets: Sequence[Sequence[int]] | None = None
) -> TranslatesCertificate:
    """The N - I translates [s_i t_j, λ], j in J_i, with an exact independence proof."""
    G = S.group
    J_sets = default_J_sets(S.I, S.J) if J_sets is None else [tuple(x) for x in J_sets]
    if len(J_sets) != S.I or any(len(set(js)) != S.J - 1 or not set(js) <= set(range(S.J)) for js in J_sets):
        raise ValueError("each J_i must be a (J-1)-subset of range(J)")
    funcs, pairs, elements = [], [], []
    supports_ok = True
    for i, (si, js) in enumerate(zip(S.s, J_sets)):
        block = set(G.left_coset(si, S.HK))
        for j in js:
            g = G.mul(si, S.t[j])
            f = act(g, lam)
            supports_ok &= all(f.transversal[p] in block for p in f.support())
            funcs.append(f)
            pairs.append((i, j))
            elements.append(g)
    r = function_rank(funcs)
    expected = S.N - S.I
    if r != expected:
        raise RankDeficient(f"translates have rank {r}, expected {expected}")
    if not supports_ok:
        raise RankDeficient("a translate is not supported on its HK coset")
    return TranslatesCertificate(funcs, pairs, elements, r, expected, supports_ok)


@dataclass
class MuCertificate:
    matrix: list
    subsets_independent: bool
    dependency: list
    dependency_sign: int


def mu_matrix_check(lam: CosetFunction, S: CosetSetting) -> MuCertificate:
    """The J×J matrix (λ(t_j⁻¹ t_i)): every J-1 columns independent, kernel of constant sign."""
    G = S.group
    J = S.J
    M = [[lam(G.mul(G.inverse(S.t[j]), S.t[i])) for j in range(J)] for i in range(J)]
    ok = all(exact.rank([[row[j] for j in cols] for row in M]) == J - 1 for cols in itertools.combinations(range(J), J - 1))
    kernel = exact.nullspace(M)
    if len(kernel) != 1:
        raise RankDeficient("μ matrix kernel is not one dimensional")
    z = kernel[0]
    signs = {(x > 0) - (x < 0) for x in z}
    if len(signs) != 1 or 0 in signs:
        raise RankDeficient("μ matrix kernel vector has mixed signs")
    den = 1
    for x in z:
        den = den * x.denominator // _gcd(den, x.denominator)
    return MuCertificate(M, ok, [int(x * den) for x in z], signs.pop())


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)
