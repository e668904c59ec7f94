"""JSON certificates: assembly, deterministic serialization, and independent re-verification."""

from __future__ import annotations

import json
from typing import Sequence

from .context import field_context
from .errors import MinkError, PrecisionExhausted, Undecided, VerificationFailed
from .field import FieldElement, NumberField
from .fixtures import Fixture, parse_fixture
from .galois import recover_automorphisms
from .groupfunc import CosetFunction, build_lambda
from .matrixlab import IntervalMatrix, certified_rank
from .minkowski import SpecialUnitCertificate, conjugate_subgroup_certificate, minkowski_matrix, verify_special
from .numcore.interval import Verdict, compare_le, interval_sum
from .numcore.poly import as_fraction
from .numcore.precision import PrecisionPolicy, PrecisionTrace, escalate
from .relative import RelativeUnitCertificate, delta, is_relative_unit, relative_extension

FORMAT = "minkunits-certificate/1"


def fixture_json(fx: Fixture) -> dict:
    return {
        "label": fx.label,
        "min_poly": list(fx.field.min_poly),
        "units": [u.to_json() for u in fx.units],
        "subfields": [{"label": k, "generator": v.to_json()} for k, v in sorted(fx.subfields.items())],
    }


def _element(K: NumberField, coeffs) -> FieldElement:
    return K.element([as_fraction(c) for c in coeffs])


def special_checks(c: SpecialUnitCertificate) -> list[dict]:
    out = [
        {"name": "signs", "status": "certified", "detail": f"{len(c.sign_checks) - 1} negative, 1 positive"},
        {"name": "height_bound", "status": "certified", "detail": "h(beta) <= 2*sum h(eta)"},
        {"name": "column_sums", "status": "certified", "detail": "enclose 0"},
        {"name": "sign_pattern", "status": "certified", "detail": "diagonal > 0, off-diagonal < 0"},
        {"name": "rank", "status": "certified", "detail": f"N-1 = {c.matrix.rank.rank}"},
        {"name": "minors", "status": "certified", "detail": f"{len(c.matrix.minors)} minors exclude 0"},
        {"name": "null_vector", "status": "certified", "detail": f"constant sign ({c.matrix.null_sign.sign.name.lower()})"},
        {"name": "index_bound", "status": "certified", "detail": c.index.method},
    ]
    if c.matrix.row_sums is not None:
        out.append({"name": "row_sums", "status": "certified", "detail": "enclose 0 (totally real)"})
    if c.matrix.complex_part is not None:
        out.append({"name": "conjugation", "status": "certified", "detail": "rho(beta), beta*rho(beta) special; row sums enclose 0"})
    return out


def relative_checks(c: RelativeUnitCertificate) -> list[dict]:
    return [
        {"name": "special_unit", "status": "certified", "detail": c.base_kind},
        {"name": "lambda_in_lattice", "status": "certified", "detail": f"l1 norm {c.lam.l1_norm()}"},
        {"name": "translates_rank", "status": "certified", "detail": f"exact rank {c.translates.rank}"},
        {"name": "relative_norm", "status": "certified", "detail": f"torsion of order {c.norm_torsion_witness}"},
        {"name": "equivariance", "status": "certified", "detail": "exact"},
        {"name": "independence", "status": "certified", "detail": f"log rank {c.independence_rank}"},
        {"name": "small_relations", "status": "certified", "detail": "none with exponents <= 10" if c.R <= 3 else "skipped (R > 3)"},
        {"name": "height_bounds", "status": "certified", "detail": "l1, theorem and unit-system bounds"},
    ]


def make_certificate(
    command: str,
    args: dict,
    fx: Fixture | None,
    result: dict | None,
    checks: Sequence[dict],
    trace: PrecisionTrace | None,
    error: MinkError | None = None,
) -> dict:
    if error is None:
        verdict = "certified" if all(c["status"] == "certified" for c in checks) else "failed"
    elif isinstance(error, PrecisionExhausted):
        verdict = "undecided"
    else:
        verdict = "error"
    cert = {
        "format": FORMAT,
        "command": {"name": command, "args": args},
        "field": fx.label if fx else None,
        "fixture": fixture_json(fx) if fx else None,
        "result": result,
        "checks": list(checks),
        "precision_trace": trace.to_json() if trace else [],
        "verdict": verdict,
    }
    if verdict == "undecided" and trace is not None:
        cert["undecided"] = sorted({e["stage"] for e in trace.events if e["outcome"] == "undecided"})
    if error is not None:
        cert["error"] = {"type": type(error).__name__, "message": str(error)}
    return cert


def dumps(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- re-verification -----------------------------------------------------------

def _check(out: list, name: str, ok: bool, detail: str = ""):
    out.append({"name": name, "status": "certified" if ok else "failed", "detail": detail})


def verify_certificate(cert: dict, policy: PrecisionPolicy | None = None) -> list[dict]:
    """Re-check every claim of an emitted certificate from its embedded fixture and values."""
    if cert.get("format") != FORMAT:
        raise VerificationFailed("not a certificate of this format")
    fx = parse_fixture(cert["fixture"], "certificate")
    kind = cert["command"]["name"]
    if cert.get("verdict") != "certified":
        raise VerificationFailed(f"certificate verdict is {cert.get('verdict')!r}")
    if kind == "special":
        return _verify_special(fx, cert["result"], policy)
    if kind == "relative":
        return _verify_relative(fx, cert["result"], cert["command"]["args"], policy)
    raise VerificationFailed(f"nothing to verify for command {kind!r}")


def _verify_special(fx: Fixture, res: dict, policy) -> list[dict]:
    K = fx.field
    w = int(res["place_index"])
    units = [_element(K, u) for u in res["units"]]
    beta = _element(K, res["beta"])
    out: list[dict] = []
    prod = K.one
    for u, x in zip(units, res["xi"]):
        prod = prod * u ** (-int(x))
    _check(out, "beta_from_units", prod == beta, "beta = prod eta^-xi exactly")
    _check(out, "unit", beta.is_unit(), "norm is +-1 and integral")
    v = verify_special(beta, w, policy=policy)
    _check(out, "special", v.special, "direct and conjugate forms agree")

    def heights(bits):
        ctx = field_context(K, bits, w)
        h = ctx.height(beta)
        bound = interval_sum([ctx.height(u) for u in units], bits) * 2
        verdict = compare_le(h, bound)
        if verdict is Verdict.TIGHT:
            raise Undecided("height enclosures overlap")
        return verdict is Verdict.HOLDS

    _check(out, "height_bound", escalate(heights, policy, stage="verify_height"), "h(beta) <= 2*sum h(eta)")
    mc = minkowski_matrix(beta, w, policy=policy)
    _check(out, "matrix", mc.rank.rank == len(mc.transversal) - 1, "rank N-1, signs, minors")
    ic = conjugate_subgroup_certificate(beta, w, units, policy=policy)
    _check(out, "index_bound", ic.ok, ic.method)
    _check(out, "relation", ic.relation == list(res["index"]["relation"]), f"y = {ic.relation}")
    return out


def _verify_relative(fx: Fixture, res: dict, args: dict, policy) -> list[dict]:
    K = fx.field
    G = recover_automorphisms(K)
    w = int(res["place_index"])
    sub = args["subfield"]
    E = relative_extension(fx.subfields[sub], sub, policy=policy)
    out: list[dict] = []
    beta = _element(K, res["special"]["beta"])
    v = verify_special(beta, w, policy=policy)
    _check(out, "special", v.special, "beta special")
    ctx0 = escalate(lambda bits: field_context(K, bits, w), policy, stage="verify_places")
    rho = ctx0.rho
    base = beta if rho is None else beta * G.apply(rho, beta)
    _check(out, "base", base == _element(K, res["base"]), res["base_kind"])
    lam = build_lambda(G, E.H, ctx0.K)
    _check(out, "lambda", list(lam.values) == list(res["lambda"]["values"]), f"values {list(lam.values)}")
    gamma = _element(K, res["gamma"])
    _check(out, "gamma", gamma == delta(base, lam, G), "gamma = Delta(base, lambda)")
    _check(out, "relative_unit", is_relative_unit(gamma, E, policy=policy).relative, "torsion relative norm")
    conj = [_element(K, c) for c in res["conjugates"]]
    elems = res["translates"]["elements"]
    _check(out, "conjugates", conj == [G.apply(g, gamma) for g in elems], "tau_i sigma_j(gamma)")
    eq = all(G.apply(g, gamma) == delta(base, CosetFunction(G, ctx0.K, f), G) for g, f in zip(elems, res["translates"]["values"]))
    _check(out, "equivariance", eq, "exact")

    def numeric(bits):
        ctx = field_context(K, bits, w)
        L = IntervalMatrix([[ctx.log_abs(c, x) for c in conj] for x in range(ctx.N)])
        rk = certified_rank(L)
        if rk.lower != E.R:
            raise Undecided("rank of conjugates not certified")
        m = E.relative_degree - 1
        h = ctx.height(gamma)
        hs = interval_sum([ctx.height(u) for u in fx.units[: ctx.N - 1]], bits)
        bound = hs * (4 * m if rho is None else 8 * m)
        verdict = compare_le(h, bound)
        if verdict is Verdict.TIGHT:
            raise Undecided("height enclosures overlap")
        return rk.lower, verdict is Verdict.HOLDS

    rank, holds = escalate(numeric, policy, stage="verify_relative")
    _check(out, "independence", rank == E.R, f"rank {rank}")
    _check(out, "height_bound", holds, "unit-system bound")
    return out
