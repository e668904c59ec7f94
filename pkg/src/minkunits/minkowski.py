"""Special Minkowski units: construction, verification, and the conjugate matrix.

A unit β is special with respect to the place ŵ when log|β|_w < 0 at every
archimedean place w ≠ ŵ.  The construction picks β⁻¹ = ∏ η_n^ξ_n with ξ a
positive integer point of the log matrix of the given units over the places
w ≠ ŵ.  Every sign, rank and inequality below is either an exact algebraic
fact or a certified interval comparison; anything undecided escalates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .context import FieldContext, field_context
from .errors import ConsistencyFailure, NotAUnit, RankDeficient, StructureViolation, Undecided, VerificationFailed
from .field import FieldElement
from .heights import regulator
from .matrixlab import (
    CofactorCertificate,
    IntegerPoint,
    IntervalMatrix,
    NullSignCertificate,
    RankCertificate,
    all_maximal_minors,
    certified_rank,
    check_cofactor_constancy,
    check_null_sign,
    interval_det,
    positive_integer_point,
)
from .numcore.interval import Interval, Sign, Verdict, compare_le, interval_sum
from .numcore.precision import PrecisionPolicy, PrecisionTrace, escalate


def _js(x: Interval) -> dict:
    return x.to_json()


# -- verification --------------------------------------------------------

@dataclass
class SpecialVerdict:
    special: bool
    reason: str
    direct: list  # (place, log|β|_w) for w ≠ ŵ
    conjugate: list  # (m, n, log|τ_m⁻¹τ_n β|_ŵ) for m ≠ n

    def __bool__(self):
        return self.special

    def to_json(self) -> dict:
        return {
            "special": self.special,
            "reason": self.reason,
            "direct": [{"place": w, "log": _js(x)} for w, x in self.direct],
            "conjugate": [{"m": m, "n": n, "log": _js(x)} for m, n, x in self.conjugate],
        }


def _all_negative(values: Sequence[Interval]) -> bool:
    """True if all certified negative, False if one is certified nonnegative, else Undecided."""
    signs = [x.sign() for x in values]
    if any(s is Sign.POSITIVE for s in signs):
        return False
    if any(s is Sign.UNDECIDED for s in signs):
        raise Undecided("sign of a log absolute value undecided")
    return True


def check_special(beta: FieldElement, ctx: FieldContext) -> SpecialVerdict:
    """Both formulations of speciality at one precision; they must agree."""
    if not beta.is_unit():
        raise NotAUnit(f"{beta} is not a unit")
    G = ctx.group
    direct = [(w, ctx.log_abs(beta, w)) for w in range(ctx.N) if w != ctx.w_hat]
    conj = []
    for m, tm in enumerate(ctx.T):
        for n, tn in enumerate(ctx.T):
            if m != n:
                g = G.mul(G.inverse(tm), tn)
                conj.append((m, n, ctx.log_abs(ctx.apply(g, beta), ctx.w_hat)))
    if beta.is_torsion():
        # every log is exactly 0, so no place is certified negative
        return SpecialVerdict(False, "torsion", direct, conj)
    d_ok = _all_negative([x for _, x in direct])
    c_ok = _all_negative([x for _, _, x in conj])
    if d_ok != c_ok:
        raise ConsistencyFailure("direct and conjugate forms of speciality disagree")
    return SpecialVerdict(d_ok, "certified" if d_ok else "a log is certified positive", direct, conj)


def verify_special(
    beta: FieldElement,
    w_hat: int = 0,
    *,
    policy: PrecisionPolicy | None = None,
    trace: PrecisionTrace | None = None,
) -> SpecialVerdict:
    return escalate(
        lambda bits: check_special(beta, field_context(beta.field, bits, w_hat)),
        policy,
        trace,
        stage="verify_special",
    )


# -- the conjugate matrix ------------------------------------------------

def conjugate_log_matrix(beta: FieldElement, ctx: FieldContext, T: Sequence[int] | None = None) -> IntervalMatrix:
    """M(β, T, ŵ) with entries log|τ_m⁻¹τ_n(β)|_ŵ, rows m and columns n."""
    G = ctx.group
    T = ctx.T if T is None else tuple(T)
    return IntervalMatrix(
        [[ctx.log_abs(ctx.apply(G.mul(G.inverse(tm), tn), beta), ctx.w_hat) for tn in T] for tm in T]
    )


@dataclass
class MinkowskiMatrixCertificate:
    matrix: IntervalMatrix
    transversal: tuple
    row_places: tuple  # τ_m ŵ
    column_sums: list
    row_sums: list | None  # totally real case
    cofactors: CofactorCertificate
    null_sign: NullSignCertificate
    rank: RankCertificate
    minors: list  # (rows, cols, det) for every (N-1)×(N-1) submatrix
    complex_part: dict | None = None

    def to_json(self) -> dict:
        out = {
            "matrix": self.matrix.to_json(),
            "transversal": list(self.transversal),
            "row_places": list(self.row_places),
            "column_sums": [_js(x) for x in self.column_sums],
            "off_diagonal_negative": True,
            "diagonal_positive": True,
            "cofactors": self.cofactors.to_json(),
            "null_vector": self.null_sign.to_json(),
            "rank": self.rank.to_json(),
            "minors": [{"rows": list(r), "cols": list(c), "det": _js(d)} for r, c, d in self.minors],
        }
        if self.row_sums is not None:
            out["row_sums"] = [_js(x) for x in self.row_sums]
        if self.complex_part is not None:
            out["complex"] = self.complex_part
        return out


def _require_signs(M: IntervalMatrix):
    n = M.shape[0]
    for m in range(n):
        for k in range(n):
            s = M[m, k].sign()
            want = Sign.POSITIVE if m == k else Sign.NEGATIVE
            if s is Sign.UNDECIDED:
                raise Undecided(f"sign of M[{m},{k}] undecided")
            if s is not want:
                raise StructureViolation(f"M[{m},{k}] has the wrong sign")


def _require_zero(sums, what: str):
    for i, x in enumerate(sums):
        if not x.contains_zero():
            raise StructureViolation(f"{what} {i} is certified nonzero")


def matrix_certificate(beta: FieldElement, ctx: FieldContext) -> MinkowskiMatrixCertificate:
    if ctx.N < 2:
        raise RankDeficient("need at least two archimedean places")
    if not check_special(beta, ctx):
        raise StructureViolation("β is not special with respect to ŵ")
    M = conjugate_log_matrix(beta, ctx)
    N = ctx.N
    # entries agree with log|τ_n β| at the place τ_m ŵ
    for m in range(N):
        w = ctx.row_place(m)
        for n, tn in enumerate(ctx.T):
            if not M[m, n].overlaps(ctx.log_abs(ctx.apply(tn, beta), w)):
                raise ConsistencyFailure("conjugate matrix entry disagrees with the place action")
    col = M.column_sums()
    _require_zero(col, "column sum")
    _require_signs(M)
    cof = check_cofactor_constancy(M)
    if not cof.nonzero:
        raise Undecided("signed cofactors not certified nonzero")
    null = check_null_sign(M)
    rank = certified_rank(M, relations=1)
    if not rank.certified:
        raise Undecided("rank of M not certified")
    if rank.rank != N - 1:
        raise StructureViolation(f"rank of M is {rank.rank}, expected {N - 1}")
    minors = all_maximal_minors(M, N - 1)
    if any(d.contains_zero() for _, _, d in minors):
        raise Undecided("an (N-1)-minor of M encloses 0")
    rows = None
    cplx = None
    if ctx.totally_real:
        rows = M.row_sums()
        _require_zero(rows, "row sum")
    else:
        cplx = _complex_checks(beta, ctx, M)
    return MinkowskiMatrixCertificate(
        M, ctx.T, tuple(ctx.row_place(m) for m in range(N)), col, rows, cof, null, rank, minors, cplx
    )


def _complex_checks(beta: FieldElement, ctx: FieldContext, M: IntervalMatrix) -> dict:
    """ρ(β) and βρ(β) are special, M(β,Tρ) = M(ρβ,T), and βρ(β) has zero row sums."""
    rho = ctx.rho
    if rho is None:
        raise StructureViolation("stabilizer of ŵ has no conjugation")
    G = ctx.group
    rb = ctx.apply(rho, beta)
    brb = beta * rb
    v1, v2 = check_special(rb, ctx), check_special(brb, ctx)
    if not (v1 and v2):
        raise StructureViolation("ρ(β) or βρ(β) is not special")
    Trho = [G.mul(t, rho) for t in ctx.T]
    A = conjugate_log_matrix(beta, ctx, Trho)
    B = conjugate_log_matrix(rb, ctx)
    n = ctx.N
    if not all(A[i, j].overlaps(B[i, j]) for i in range(n) for j in range(n)):
        raise ConsistencyFailure("M(β, Tρ) and M(ρβ, T) differ")
    P = conjugate_log_matrix(brb, ctx)
    rows = P.row_sums()
    _require_zero(rows, "row sum of the βρ(β) matrix")
    _require_zero(P.column_sums(), "column sum of the βρ(β) matrix")
    return {
        "rho": rho,
        "rho_beta": rb.to_json(),
        "beta_rho_beta": brb.to_json(),
        "rho_beta_special": True,
        "beta_rho_beta_special": True,
        "shifted_transversal_matches": True,
        "beta_rho_beta_matrix": P.to_json(),
        "beta_rho_beta_row_sums": [_js(x) for x in rows],
    }


def minkowski_matrix(
    beta: FieldElement,
    w_hat: int = 0,
    *,
    policy: PrecisionPolicy | None = None,
    trace: PrecisionTrace | None = None,
) -> MinkowskiMatrixCertificate:
    return escalate(
        lambda bits: matrix_certificate(beta, field_context(beta.field, bits, w_hat)),
        policy,
        trace,
        stage="minkowski_matrix",
    )


# -- the subgroup generated by the conjugates --------------------------------

@dataclass
class IndexCertificate:
    conjugates: list
    subset_minors: list  # (dropped column, det) witnessing each (N-1)-subset
    relation: list  # primitive integer y with ∏ τ_n(β)^y_n torsion
    relation_torsion_order: int
    reg_B: Interval  # covolume of 𝔅 = Reg(l)·[F_l : 𝔅]
    bound: Interval  # (d·h(β))^(N-1)
    verdict: str  # "holds" or "holds (exact)" for N = 2
    method: str
    chained_bound: Interval | None = None  # (2d Σ h(η))^(N-1)
    fixture_regulator: Interval | None = None
    relative_index: Interval | None = None  # Reg(𝔅) / Reg(fixture units)

    @property
    def ok(self) -> bool:
        return self.verdict.startswith("holds")

    def to_json(self) -> dict:
        out = {
            "conjugates": [c.to_json() for c in self.conjugates],
            "subsets_independent": [{"dropped": k, "det": _js(d)} for k, d in self.subset_minors],
            "relation": list(self.relation),
            "relation_torsion_order": self.relation_torsion_order,
            "regulator_B": _js(self.reg_B),
            "bound": _js(self.bound),
            "verdict": self.verdict,
            "method": self.method,
        }
        if self.chained_bound is not None:
            out["chained_bound"] = _js(self.chained_bound)
        if self.fixture_regulator is not None:
            out["fixture_regulator"] = _js(self.fixture_regulator)
            out["index_relative_to_fixture"] = _js(self.relative_index)
        return out


def integer_relation(conj: Sequence[FieldElement], y: Sequence[Interval]) -> tuple[list[int], int]:
    """Primitive integer vector proportional to the enclosures ``y``, verified exactly.

    Verification: ∏ conj_n^y_n is a root of unity.  Returns (vector, order).
    """
    ratios = [x / y[0] for x in y]
    for D in (1, 10, 100, 10**3, 10**4, 10**6):
        fr = [r.center_fraction().limit_denominator(D) for r in ratios]
        if not all(r.contains(f) for r, f in zip(ratios, fr)):
            continue
        den = math.lcm(*(f.denominator for f in fr))
        z = [int(f * den) for f in fr]
        g = math.gcd(*z)
        z = [v // g for v in z]
        if z[0] < 0:
            z = [-v for v in z]
        prod = conj[0].field.one
        for c, e in zip(conj, z):
            prod = prod * c**e
        order = prod.torsion_order()
        if order:
            return z, order
    raise Undecided("no exact relation among the conjugates found")


def index_certificate(
    beta: FieldElement,
    ctx: FieldContext,
    null: NullSignCertificate,
    units: Sequence[FieldElement] | None = None,
) -> IndexCertificate:
    N, d = ctx.N, ctx.degree
    conj = [ctx.apply(t, beta) for t in ctx.T]
    # columns of the place-indexed log matrix, one per conjugate
    L = IntervalMatrix([[ctx.log_abs(c, w) for c in conj] for w in range(N)])
    keep_rows = list(range(N - 1))
    minors = []
    for k in range(N):
        det = interval_det(L.submatrix(keep_rows, [n for n in range(N) if n != k]))
        if det.contains_zero():
            raise Undecided(f"conjugate subset without {k} not certified independent")
        minors.append((k, det))
    y, order = integer_relation(conj, null.vector)
    if any(v <= 0 for v in y):
        raise StructureViolation("relation among conjugates is not of constant sign")
    reg_sub = regulator(conj[: N - 1], ctx.places).standard
    reg_B = reg_sub / y[-1]
    h = ctx.height(beta)
    bound = (h * d) ** (N - 1)
    if N == 2:
        # Reg(𝔅) = d·h(β)/y_2 exactly, so the bound is y_2 >= 1
        verdict, method = "holds (exact)", "N=2 structural: reduces to y_2 >= 1"
    else:
        v = compare_le(reg_B, bound)
        if v is Verdict.TIGHT:
            raise Undecided("index bound enclosures overlap")
        if v is Verdict.FAILS:
            raise VerificationFailed("index bound violated")
        verdict, method = "holds", "interval comparison"
    cert = IndexCertificate(conj, minors, y, order, reg_B, bound, verdict, method)
    if units:
        hs = interval_sum([ctx.height(u) for u in units], ctx.bits)
        cert.chained_bound = (hs * (2 * d)) ** (N - 1)
        cert.fixture_regulator = regulator(list(units), ctx.places).standard
        cert.relative_index = reg_B / cert.fixture_regulator
    return cert


def conjugate_subgroup_certificate(
    beta: FieldElement,
    w_hat: int = 0,
    units: Sequence[FieldElement] | None = None,
    *,
    policy: PrecisionPolicy | None = None,
    trace: PrecisionTrace | None = None,
) -> IndexCertificate:
    def run(bits):
        ctx = field_context(beta.field, bits, w_hat)
        mc = matrix_certificate(beta, ctx)
        return index_certificate(beta, ctx, mc.null_sign, units)

    return escalate(run, policy, trace, stage="conjugate_subgroup")


# -- construction ---------------------------------------------------------

@dataclass
class SpecialUnitCertificate:
    beta: FieldElement
    place_index: int
    units: list
    xi: list
    solver: IntegerPoint
    sign_checks: list  # (place, log|β|_w, "negative" | "positive")
    height: Interval
    height_bound: Interval
    matrix: MinkowskiMatrixCertificate
    index: IndexCertificate
    bits: int
    verdict: SpecialVerdict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def matrix_rank(self) -> RankCertificate:
        return self.matrix.rank

    @property
    def index_bound_ok(self) -> bool:
        return self.index.ok

    def to_json(self) -> dict:
        return {
            "beta": self.beta.to_json(),
            "beta_display": str(self.beta),
            "place_index": self.place_index,
            "units": [u.to_json() for u in self.units],
            "xi": list(self.xi),
            "solver": self.solver.to_json(),
            "sign_checks": [{"place": w, "log": _js(x), "sign": s} for w, x, s in self.sign_checks],
            "height": _js(self.height),
            "height_bound": _js(self.height_bound),
            "height_bound_holds": True,
            "matrix": self.matrix.to_json(),
            "matrix_rank": self.matrix.rank.to_json(),
            "index": self.index.to_json(),
            "index_bound_ok": self.index_bound_ok,
            "verify_special": self.verdict.to_json() if self.verdict else None,
            "bits": self.bits,
        }


def build_special(units: Sequence[FieldElement], ctx: FieldContext) -> SpecialUnitCertificate:
    """One attempt at fixed precision."""
    N = ctx.N
    if N < 2:
        raise RankDeficient("the field has unit rank 0")
    if len(units) < N - 1:
        raise RankDeficient(f"need {N - 1} independent units, got {len(units)}")
    units = list(units[: N - 1])
    for u in units:
        if not u.is_unit():
            raise NotAUnit(f"{u} is not a unit")
    regulator(units, ctx.places)  # independence, escalates while the determinant encloses 0
    rows = [w for w in range(N) if w != ctx.w_hat]
    A = IntervalMatrix([[ctx.log_abs(u, w) for u in units] for w in rows])
    point = positive_integer_point(A)
    beta = ctx.field.one
    for u, x in zip(units, point.xi):
        beta = beta * u ** (-x)
    signs = []
    for w in range(N):
        lg = ctx.log_abs(beta, w)
        s = lg.sign()
        if s is Sign.UNDECIDED:
            raise Undecided(f"sign of log|β| at place {w} undecided")
        want = Sign.POSITIVE if w == ctx.w_hat else Sign.NEGATIVE
        if s is not want:
            raise VerificationFailed(f"log|β| at place {w} has the wrong sign")
        signs.append((w, lg, s.name.lower()))
    h = ctx.height(beta)
    bound = interval_sum([ctx.height(u) for u in units], ctx.bits) * 2
    v = compare_le(h, bound)
    if v is Verdict.TIGHT:
        raise Undecided("height bound enclosures overlap")
    if v is Verdict.FAILS:
        raise VerificationFailed("height bound violated")
    mc = matrix_certificate(beta, ctx)
    ic = index_certificate(beta, ctx, mc.null_sign, units)
    verdict = check_special(beta, ctx)
    return SpecialUnitCertificate(
        beta, ctx.w_hat, units, list(point.xi), point, signs, h, bound, mc, ic, ctx.bits, verdict
    )


def construct_special_unit(
    units: Sequence[FieldElement],
    w_hat: int = 0,
    *,
    policy: PrecisionPolicy | None = None,
    trace: PrecisionTrace | None = None,
) -> SpecialUnitCertificate:
    """A certified special unit with respect to place ``w_hat`` in the group generated by ``units``.

    Only the first N-1 units are used.
    """
    if not units:
        raise RankDeficient("no units given")
    K = units[0].field
    return escalate(lambda bits: build_special(units, field_context(K, bits, w_hat)), policy, trace, stage="special")
