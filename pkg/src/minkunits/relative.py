"""Relative units of l/k, the map Δ(α, f) = ∏ ψ_n(α)^f(ψ_n), and relative Minkowski units.

Membership in the relative unit group is decided exactly (the relative norm
is a root of unity) and cross-checked numerically against the fiber sums of
log absolute values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .context import FieldContext, field_context
from .errors import (
    ConsistencyFailure,
    ExcludedCase,
    NotAUnit,
    RankDeficient,
    StructureViolation,
    Undecided,
    VerificationFailed,
)
from .field import FieldElement, NumberField
from .galois import GaloisGroup, Subgroup, recover_automorphisms
from .groupfunc import (
    CosetFunction,
    CosetSetting,
    TranslatesCertificate,
    act,
    build_lambda,
    coset_setting,
    hk_coset_sums,
    independent_translates,
    lattice_basis,
)
from .matrixlab import IntervalMatrix, certified_rank, interval_det
from .minkowski import SpecialUnitCertificate, build_special, check_special, conjugate_log_matrix
from .numcore.interval import Interval, Verdict, compare_le, interval_sum
from .numcore.precision import PrecisionPolicy, PrecisionTrace, escalate
from .places import fiber_over_subfield


def _js(x: Interval) -> dict:
    return x.to_json()


# -- the extension ----------------------------------------------------------

@dataclass(frozen=True)
class RelativeExtension:
    field: NumberField
    group: GaloisGroup
    H: Subgroup  # Aut(l/k)
    k_generator: FieldElement
    k_label: str
    r_l: int
    r_k: int
    fibers: tuple  # places of l grouped by the place of k below

    @property
    def R(self) -> int:
        return self.r_l - self.r_k

    @property
    def relative_degree(self) -> int:
        return len(self.H)

    def to_json(self) -> dict:
        return {
            "subfield": self.k_label,
            "k_generator": self.k_generator.to_json(),
            "H": list(self.H),
            "relative_degree": self.relative_degree,
            "r_l": self.r_l,
            "r_k": self.r_k,
            "R": self.R,
            "fibers": [list(f) for f in self.fibers],
        }


def relative_extension(
    k_generator: FieldElement,
    label: str = "k",
    *,
    policy: PrecisionPolicy | None = None,
    trace: PrecisionTrace | None = None,
) -> RelativeExtension:
    """l/k with k = ℚ(k_generator); rejects non-normal H and the cases r(k) = 0 or r(k) = r(l)."""
    l = k_generator.field
    G = recover_automorphisms(l)
    H = G.fixed_by(k_generator)
    G.require_normal(H)

    def run(bits):
        ctx = field_context(l, bits)
        return tuple(fiber_over_subfield(ctx.places, k_generator, G, H)), ctx.N

    fibers, N = escalate(run, policy, trace, stage="fibers")
    r_l, r_k = N - 1, len(fibers) - 1
    if r_k < 1:
        raise ExcludedCase(f"{label} has unit rank 0, so relative units are all units")
    if r_k >= r_l:
        raise ExcludedCase(f"r({label}) = r(l) = {r_l}: the relative unit group is trivial")
    return RelativeExtension(l, G, H, k_generator, label, r_l, r_k, fibers)


def relative_norm(alpha: FieldElement, H: Sequence[int], group: GaloisGroup | None = None) -> FieldElement:
    """∏_{h ∈ H} h(α), verified to be fixed by every element of H."""
    group = group or recover_automorphisms(alpha.field)
    if not group.is_subgroup(H):
        raise StructureViolation("H is not a subgroup")
    out = alpha.field.one
    for h in H:
        out = out * group.apply(h, alpha)
    if any(group.apply(h, out) != out for h in H):
        raise ConsistencyFailure("relative norm is not fixed by H")
    return out


@dataclass
class RelativeUnitCheck:
    relative: bool
    torsion_order: int | None
    fiber_sums: list

    def __bool__(self):
        return self.relative

    def to_json(self) -> dict:
        return {
            "relative_unit": self.relative,
            "norm_torsion_order": self.torsion_order,
            "fiber_sums": [_js(x) for x in self.fiber_sums],
        }


def check_relative_unit(alpha: FieldElement, E: RelativeExtension, ctx: FieldContext) -> RelativeUnitCheck:
    if not alpha.is_unit():
        raise NotAUnit(f"{alpha} is not a unit")
    order = relative_norm(alpha, E.H, E.group).torsion_order()
    sums = [interval_sum([ctx.log_abs(alpha, w) for w in fib], ctx.bits) for fib in E.fibers]
    numeric_zero = all(s.contains_zero() for s in sums)
    if order is not None and not numeric_zero:
        raise ConsistencyFailure("torsion relative norm but a fiber sum is certified nonzero")
    if order is None and numeric_zero:
        raise Undecided("fiber sums enclose 0 for a unit with non-torsion relative norm")
    return RelativeUnitCheck(order is not None, order, sums)


def is_relative_unit(
    alpha: FieldElement,
    E: RelativeExtension,
    *,
    policy: PrecisionPolicy | None = None,
    trace: PrecisionTrace | None = None,
) -> RelativeUnitCheck:
    return escalate(
        lambda bits: check_relative_unit(alpha, E, field_context(E.field, bits)), policy, trace, stage="relative_unit"
    )


@dataclass
class ActionCertificate:
    elements: list  # (automorphism, image, check)

    @property
    def preserved(self) -> bool:
        return all(c.relative for _, _, c in self.elements)

    def to_json(self) -> dict:
        return {
            "preserved": self.preserved,
            "images": [{"automorphism": g, "image": a.to_json(), "check": c.to_json()} for g, a, c in self.elements],
        }


def galois_action_preserves(
    alpha: FieldElement, E: RelativeExtension, *, policy: PrecisionPolicy | None = None
) -> ActionCertificate:
    """τ(α) is a relative unit for every τ in G (α itself must be one)."""
    if not is_relative_unit(alpha, E, policy=policy):
        raise VerificationFailed("α is not a relative unit")
    out = []
    for g in E.group.elements:
        img = E.group.apply(g, alpha)
        out.append((g, img, is_relative_unit(img, E, policy=policy)))
    return ActionCertificate(out)


# -- Δ ------------------------------------------------------------------------

def delta(alpha: FieldElement, f: CosetFunction, group: GaloisGroup | None = None) -> FieldElement:
    """Δ(α, f) = ∏_n ψ_n(α)^f(ψ_n) over the canonical transversal ψ of K."""
    group = group or f.group
    out = alpha.field.one
    for psi, e in zip(f.transversal, f.values):
        if e:
            out = out * group.apply(psi, alpha) ** e
    return out


def delta_height_check(alpha: FieldElement, f: CosetFunction, ctx: FieldContext) -> tuple[Interval, Interval, str]:
    """h(Δ(α, f)) ≤ ‖f‖₁ h(α); returns both sides and how it was decided.

    Equality is exact when f has a single nonzero value or α is torsion,
    and then overlapping enclosures are accepted.
    """
    lhs = ctx.height(delta(alpha, f, ctx.group))
    rhs = ctx.height(alpha) * f.l1_norm()
    v = compare_le(lhs, rhs)
    if v is Verdict.HOLDS:
        return lhs, rhs, "interval"
    if v is Verdict.TIGHT and (len(f.support()) <= 1 or alpha.is_torsion()):
        return lhs, rhs, "exact equality"
    _require_le(lhs, rhs, "Δ height bound")
    return lhs, rhs, "interval"


def delta_equivariance_check(alpha: FieldElement, f: CosetFunction, eta: int, rho: int | None = None) -> bool:
    """η(Δ(a, f)) == Δ(a, [η, f]) exactly, with a = α (real case) or αρ(α) (complex case)."""
    G = f.group
    a = alpha if rho is None else alpha * G.apply(rho, alpha)
    return G.apply(eta, delta(a, f)) == delta(a, act(eta, f))


def _require_le(a: Interval, b: Interval, what: str):
    v = compare_le(a, b)
    if v is Verdict.TIGHT:
        raise Undecided(f"{what}: enclosures overlap")
    if v is Verdict.FAILS:
        raise VerificationFailed(f"{what} violated")


# -- kernel and image -----------------------------------------------------------

def sigma_transversal(G: GaloisGroup, H, K) -> tuple[int, ...]:
    """Transversal of K in KH: H itself when H ∩ K = 1, else the canonical one of K in H."""
    if G.intersection(H, K) == (0,):
        return tuple(sorted(H))
    return G.left_transversal(K, within=H)


def relative_setting(E: RelativeExtension, ctx: FieldContext) -> CosetSetting:
    return coset_setting(E.group, E.H, ctx.K, t=sigma_transversal(E.group, E.H, ctx.K))


def fiber_sum_constancy(alpha: FieldElement, E: RelativeExtension, ctx: FieldContext) -> list:
    """Σ_{w|v} log|τ_i σ_j α|_w for all i, j and v; must not depend on j."""
    S = relative_setting(E, ctx)
    G = E.group
    table = []
    for i, ti in enumerate(S.s):
        rows = []
        for sj in S.t:
            img = G.apply(G.mul(ti, sj), alpha)
            rows.append([interval_sum([ctx.log_abs(img, w) for w in fib], ctx.bits) for fib in E.fibers])
        for v in range(len(E.fibers)):
            vals = [r[v] for r in rows]
            if not all(a.overlaps(b) for a, b in itertools.combinations(vals, 2)):
                raise StructureViolation(f"fiber sum at v={v} depends on σ_j for τ_{i}")
        table.append(rows)
    return table


@dataclass
class KernelImageCertificate:
    matrix_rank: int
    null_vector_sign: str
    lattice_rank: int
    basis_images_relative: list  # RelativeUnitCheck per basis function
    image_rank: int
    counterexample: dict | None
    fiber_sums: list

    def to_json(self) -> dict:
        return {
            "matrix_rank": self.matrix_rank,
            "kernel_rank": 1,
            "null_vector_sign": self.null_vector_sign,
            "lattice_rank": self.lattice_rank,
            "basis_images": [c.to_json() for c in self.basis_images_relative],
            "image_rank": self.image_rank,
            "counterexample": self.counterexample,
            "fiber_sums": [[[_js(x) for x in r] for r in rows] for rows in self.fiber_sums],
        }


def check_kernel_and_image(beta: FieldElement, E: RelativeExtension, ctx: FieldContext) -> KernelImageCertificate:
    from .matrixlab import check_null_sign

    if not check_special(beta, ctx):
        raise StructureViolation("β is not special")
    M = conjugate_log_matrix(beta, ctx)
    rank = certified_rank(M, relations=1)
    if rank.lower != ctx.N - 1:
        raise Undecided("rank of M not certified to be N-1")
    null = check_null_sign(M)
    basis = lattice_basis(E.H, ctx.K, E.group)
    images = [delta(beta, f, E.group) for f in basis]
    checks = [check_relative_unit(a, E, ctx) for a in images]
    if not all(checks):
        raise StructureViolation("Δ of a lattice function is not a relative unit")
    L = IntervalMatrix([[ctx.log_abs(a, w) for a in images] for w in range(ctx.N)])
    img_rank = certified_rank(L).lower
    if img_rank != len(basis):
        raise Undecided("image rank not certified")
    # a function off the lattice: the indicator of the first coset
    e0 = CosetFunction.indicator(E.group, ctx.K, 0)
    sums = hk_coset_sums(e0, E.H, ctx.K)
    c0 = check_relative_unit(delta(beta, e0, E.group), E, ctx)
    counter = {"function": list(e0.values), "coset_sums": sums, "relative_unit": c0.relative}
    if c0.relative:
        raise StructureViolation("Δ(β, e) is unexpectedly a relative unit")
    return KernelImageCertificate(
        rank.lower, null.sign.name.lower(), len(basis), checks, img_rank, counter, fiber_sum_constancy(beta, E, ctx)
    )


def kernel_and_image_ranks(
    beta: FieldElement, E: RelativeExtension, w_hat: int = 0, *, policy: PrecisionPolicy | None = None
) -> KernelImageCertificate:
    return escalate(
        lambda bits: check_kernel_and_image(beta, E, field_context(E.field, bits, w_hat)), policy, stage="kernel_image"
    )


# -- construction -------------------------------------------------------------------

def small_relation_search(elements: Sequence[FieldElement], ctx: FieldContext, bound: int = 10) -> list[int] | None:
    """A nonzero exponent vector in [-bound, bound] making ∏ x^e torsion, or None.

    Candidates whose log vector is certified nonzero are discarded without
    exact arithmetic; the rest are tested exactly.
    """
    logs = [ctx.log_vector(x) for x in elements]
    for e in itertools.product(range(-bound, bound + 1), repeat=len(elements)):
        if not any(e):
            continue
        if any(not interval_sum([c * lv[w] for c, lv in zip(e, logs)], ctx.bits).contains_zero() for w in range(ctx.N)):
            continue
        prod = ctx.field.one
        for x, c in zip(elements, e):
            prod = prod * x**c
        if prod.is_torsion():
            return list(e)
    return None


@dataclass
class RelativeUnitCertificate:
    extension: RelativeExtension
    place_index: int
    gamma: FieldElement
    lam: CosetFunction
    base: FieldElement
    base_kind: str  # "beta" or "beta*rho(beta)"
    special: SpecialUnitCertificate
    setting: CosetSetting
    translates: TranslatesCertificate
    conjugate_set: list  # (i, j)
    conjugates: list
    equivariance: list  # booleans, one per conjugate
    independence_rank: int
    independence_witness: Interval
    small_relation: list | None
    norm_check: RelativeUnitCheck
    conjugate_checks: list
    height: Interval
    height_bound: Interval  # ‖λ‖₁ h(base)
    theorem_bound: Interval  # 2([l:k]-1)h(β) or 4([l:k]-1)h(β)
    fixture_bound: Interval  # 4 or 8 times ([l:k]-1)Σh(η)
    conjugate_regulator: Interval
    bits: int
    notes: list = field(default_factory=list)
    conjugate_logs: IntervalMatrix | None = None  # rows places, columns conjugates

    @property
    def norm_torsion_witness(self) -> int:
        return self.norm_check.torsion_order

    @property
    def R(self) -> int:
        return self.extension.R

    def to_json(self) -> dict:
        S = self.setting
        return {
            "extension": self.extension.to_json(),
            "place_index": self.place_index,
            "gamma": self.gamma.to_json(),
            "gamma_display": str(self.gamma),
            "lambda": {"transversal": list(self.lam.transversal), "values": list(self.lam.values), "l1_norm": self.lam.l1_norm()},
            "base": self.base.to_json(),
            "base_kind": self.base_kind,
            "setting": {
                "case": S.case,
                "K": list(S.K),
                "HK": list(S.HK),
                "tau": list(S.s),
                "sigma": list(S.t),
                "I": S.I,
                "J": S.J,
            },
            "translates": self.translates.to_json(),
            "conjugate_set": [list(p) for p in self.conjugate_set],
            "conjugates": [c.to_json() for c in self.conjugates],
            "equivariance": self.equivariance,
            "independence_rank": self.independence_rank,
            "independence_witness": _js(self.independence_witness),
            "small_relation_search": {"bound": 10, "found": self.small_relation},
            "norm_check": self.norm_check.to_json(),
            "norm_torsion_witness": self.norm_torsion_witness,
            "conjugate_checks": [c.to_json() for c in self.conjugate_checks],
            "height": _js(self.height),
            "height_bound_l1": _js(self.height_bound),
            "height_bound_theorem": _js(self.theorem_bound),
            "height_bound_fixture": _js(self.fixture_bound),
            "conjugate_regulator": _js(self.conjugate_regulator),
            "special": self.special.to_json(),
            "bits": self.bits,
            "notes": list(self.notes),
            "conjugate_logs": self.conjugate_logs.to_json() if self.conjugate_logs is not None else [],
        }


def build_relative(E: RelativeExtension, units: Sequence[FieldElement], ctx: FieldContext) -> RelativeUnitCertificate:
    G = E.group
    sp = build_special(units, ctx)
    beta = sp.beta
    rho = ctx.rho
    if rho is None:
        base, kind = beta, "beta"
    else:
        base, kind = beta * G.apply(rho, beta), "beta*rho(beta)"
        if not check_special(base, ctx):
            raise StructureViolation("βρ(β) is not special")
    S = relative_setting(E, ctx)
    if S.N - S.I != E.R:
        raise StructureViolation(f"N - I = {S.N - S.I} but r(l) - r(k) = {E.R}")
    lam = build_lambda(G, E.H, ctx.K)
    notes = []
    if lam.l1_norm() != 2 * (S.J - 1):
        raise StructureViolation("‖λ‖₁ differs from 2(J-1)")
    if S.J != E.relative_degree:
        notes.append(f"K lies in H, so J = {S.J} < [l:k] = {E.relative_degree} and ‖λ‖₁ = {lam.l1_norm()}")
    tr = independent_translates(lam, S)
    gamma = delta(base, lam, G)
    norm_check = check_relative_unit(gamma, E, ctx)
    if not norm_check:
        raise StructureViolation("γ is not a relative unit")
    conj, eq, checks = [], [], []
    for g, f in zip(tr.elements, tr.functions):
        c = G.apply(g, gamma)
        eq.append(c == delta(base, f, G))
        conj.append(c)
        checks.append(check_relative_unit(c, E, ctx))
    if not all(eq):
        raise StructureViolation("conjugate of γ differs from Δ of the translated λ")
    L = IntervalMatrix([[ctx.log_abs(c, w) for c in conj] for w in range(ctx.N)])
    rk = certified_rank(L)
    if rk.lower != E.R:
        raise Undecided(f"conjugates certified to rank {rk.lower} only, need {E.R}")
    rel = small_relation_search(conj, ctx) if E.R <= 3 else None
    if rel is not None:
        raise StructureViolation(f"small multiplicative relation {rel} among conjugates")
    h_gamma = ctx.height(gamma)
    h_base = ctx.height(base)
    h_beta = ctx.height(beta)
    l1 = h_base * lam.l1_norm()
    m = E.relative_degree - 1
    thm = h_beta * (2 * m if rho is None else 4 * m)
    sum_h = interval_sum([ctx.height(u) for u in sp.units], ctx.bits)
    fix = sum_h * (4 * m if rho is None else 8 * m)
    _require_le(h_gamma, l1, "h(γ) ≤ ‖λ‖₁ h(base)")
    _require_le(h_gamma, thm, "h(γ) relative bound")
    _require_le(h_gamma, fix, "h(γ) bound in terms of the unit system")
    gram = IntervalMatrix(
        [[interval_sum([L[w, a] * L[w, b] for w in range(ctx.N)], ctx.bits) for b in range(E.R)] for a in range(E.R)]
    )
    reg = interval_det(gram)
    if reg.contains_zero():
        raise Undecided("Gram determinant of the conjugates encloses 0")
    return RelativeUnitCertificate(
        E, ctx.w_hat, gamma, lam, base, kind, sp, S, tr, list(tr.pairs), conj, eq, rk.lower, rk.witness_det,
        rel, norm_check, checks, h_gamma, l1, thm, fix, reg.sqrt(), ctx.bits, notes, L,
    )


def construct_relative_unit(
    E: RelativeExtension,
    units: Sequence[FieldElement],
    w_hat: int = 0,
    *,
    policy: PrecisionPolicy | None = None,
    trace: PrecisionTrace | None = None,
) -> RelativeUnitCertificate:
    """γ = Δ(β, λ) (or Δ(βρ(β), λ)) with R certified independent conjugates in the relative unit group."""
    if len(units) < E.r_l:
        raise RankDeficient(f"need {E.r_l} units, got {len(units)}")
    return escalate(lambda bits: build_relative(E, units, field_context(E.field, bits, w_hat)), policy, trace, stage="relative")
