"""Command line front end: ``minkunits {info,special,relative,verify,selftest}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .certificates import dumps, make_certificate, relative_checks, special_checks, verify_certificate
from .context import field_context
from .errors import ExcludedCase, InvalidFixture, MinkError, PrecisionExhausted, Undecided
from .fixtures import Fixture, load_fixture
from .galois import recover_automorphisms
from .heights import regulator
from .minkowski import construct_special_unit
from .numcore.interval import strict_intervals, strict_mode_enabled
from .numcore.precision import PrecisionPolicy, PrecisionTrace, escalate
from .relative import construct_relative_unit, relative_extension
from .report import render_figures, render_text

EXIT = {"certified": 0, "failed": 1, "error": 1, "undecided": 2}

SELFTEST_SPECIAL = [("sqrt2", None), ("sqrt5", None), ("biquad", None), ("zeta5", None), ("zeta20", None)]
SELFTEST_RELATIVE = [("biquad", "sqrt2", "certified"), ("zeta20", "sqrt5", "certified"), ("zeta5", "sqrt5", "excluded")]


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="minkunits", description="Certified Minkowski units in Galois number fields.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=128, metavar="BITS", help="starting working precision")
    common.add_argument("--max-precision", type=int, default=8192, metavar="BITS", help="escalation ceiling")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON certificate (default)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text", help="tab-delimited summary")
    common.add_argument("--output", "-o", metavar="FILE", help="write the certificate JSON here as well")
    common.add_argument("--figures", metavar="DIR", help="render PNG figures into DIR")
    common.add_argument("--strict", action="store_true", help="forbid float coercion of intervals")
    field = argparse.ArgumentParser(add_help=False)
    field.add_argument("--field", required=True, metavar="PATH", help="fixture JSON path or bundled name")
    field.add_argument("--units", metavar="LIST", help="comma-separated fixture unit indices, in order")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common, field], help="degree, places, Galois group")
    sp = sub.add_parser("special", parents=[common, field], help="construct a special Minkowski unit")
    sp.add_argument("--place", type=int, default=0)
    rp = sub.add_parser("relative", parents=[common, field], help="construct a relative Minkowski unit")
    rp.add_argument("--subfield", required=True, metavar="LABEL")
    rp.add_argument("--place", type=int, default=0)
    vp = sub.add_parser("verify", parents=[common], help="re-check an emitted certificate")
    vp.add_argument("certificate", metavar="CERT")
    sub.add_parser("selftest", parents=[common], help="run the bundled corpus")
    return p


def _policy(args) -> PrecisionPolicy:
    return PrecisionPolicy(args.precision, max(args.max_precision, args.precision))


def _units(fx: Fixture, spec: str | None):
    if not spec:
        return list(fx.units)
    try:
        idx = [int(x) for x in spec.split(",") if x.strip()]
        return [fx.units[i] for i in idx]
    except (ValueError, IndexError) as exc:
        raise InvalidFixture(f"bad --units {spec!r}: {exc}") from exc


def _echo(args) -> dict:
    keep = ("field", "units", "place", "subfield", "precision", "max_precision", "certificate")
    return {k: getattr(args, k) for k in keep if getattr(args, k, None) is not None}


def run_info(args) -> dict:
    fx = load_fixture(args.field)
    policy = _policy(args)
    ctx = escalate(lambda bits: field_context(fx.field, bits), policy, stage="places")
    G = recover_automorphisms(fx.field)
    r1 = sum(1 for p in ctx.places if p.is_real)
    result = {
        "degree": fx.field.degree,
        "N": ctx.N,
        "signature": [r1, ctx.N - r1],
        "group": G.structure,
        "totally_real": ctx.totally_real,
        "places": [{"index": p.index, "kind": "real" if p.is_real else "complex", "root": p.describe()} for p in ctx.places],
        "automorphisms": [a.image.to_json() for a in G.automorphisms],
        "subfields": {k: list(G.fixed_by(v)) for k, v in sorted(fx.subfields.items())},
    }
    units = _units(fx, args.units)
    if len(units) >= ctx.N - 1 >= 1:
        reg = escalate(lambda bits: regulator(units[: ctx.N - 1], field_context(fx.field, bits).places), policy, stage="regulator")
        result["regulator"] = reg.to_json()
    return make_certificate("info", _echo(args), fx, result, [], None)


def run_special(args) -> dict:
    fx = load_fixture(args.field)
    trace = PrecisionTrace()
    try:
        c = construct_special_unit(_units(fx, args.units), args.place, policy=_policy(args), trace=trace)
    except PrecisionExhausted as exc:
        return make_certificate("special", _echo(args), fx, None, [], trace, exc)
    return make_certificate("special", _echo(args), fx, c.to_json(), special_checks(c), trace)


def run_relative(args) -> dict:
    fx = load_fixture(args.field)
    if args.subfield not in fx.subfields:
        raise InvalidFixture(f"fixture has no subfield {args.subfield!r}; known: {sorted(fx.subfields)}")
    trace = PrecisionTrace()
    policy = _policy(args)
    try:
        E = relative_extension(fx.subfields[args.subfield], args.subfield, policy=policy, trace=trace)
        c = construct_relative_unit(E, _units(fx, args.units), args.place, policy=policy, trace=trace)
    except PrecisionExhausted as exc:
        return make_certificate("relative", _echo(args), fx, None, [], trace, exc)
    return make_certificate("relative", _echo(args), fx, c.to_json(), relative_checks(c), trace)


def run_verify(args) -> dict:
    try:
        data = json.loads(Path(args.certificate).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidFixture(f"cannot read certificate: {exc}") from exc
    checks = verify_certificate(data, _policy(args))
    from .fixtures import parse_fixture

    fx = parse_fixture(data["fixture"], args.certificate)
    result = {"target": data["command"]["name"], "target_verdict": data["verdict"]}
    return make_certificate("verify", _echo(args), fx, result, checks, None)


def run_selftest(args) -> dict:
    runs, checks = [], []

    def record(name, verdict, detail=""):
        runs.append({"name": name, "verdict": verdict, "detail": detail})
        checks.append({"name": name, "status": "certified" if verdict in ("certified", "excluded (expected)") else "failed", "detail": detail})

    policy = _policy(args)
    for name, _ in SELFTEST_SPECIAL:
        fx = load_fixture(name)
        ns = argparse.Namespace(**{**vars(args), "field": name, "units": None, "place": 0})
        cert = run_special(ns)
        verdict = cert["verdict"]
        if verdict == "certified":
            vchecks = verify_certificate(cert, policy)
            if not all(c["status"] == "certified" for c in vchecks):
                verdict = "failed"
        record(f"special:{fx.label}", verdict, cert["result"]["beta_display"] if cert["result"] else "")
    for name, sub, expect in SELFTEST_RELATIVE:
        ns = argparse.Namespace(**{**vars(args), "field": name, "units": None, "place": 0, "subfield": sub})
        try:
            cert = run_relative(ns)
        except ExcludedCase as exc:
            record(f"relative:{name}/{sub}", "excluded (expected)" if expect == "excluded" else "failed", str(exc))
            continue
        verdict = cert["verdict"]
        if expect == "excluded":
            verdict = "failed"
        elif verdict == "certified":
            vchecks = verify_certificate(cert, policy)
            if not all(c["status"] == "certified" for c in vchecks):
                verdict = "failed"
        record(f"relative:{name}/{sub}", verdict, f"R={cert['result']['extension']['R']}" if cert["result"] else "")
    return make_certificate("selftest", _echo(args), None, {"runs": runs}, checks, None)


COMMANDS = {"info": run_info, "special": run_special, "relative": run_relative, "verify": run_verify, "selftest": run_selftest}


def _emit(cert: dict, args) -> None:
    text = dumps(cert)
    if args.output:
        Path(args.output).write_text(text)
    sys.stdout.write(render_text(cert) if args.fmt == "text" else text)
    if args.figures:
        for path in render_figures(cert, args.figures):
            sys.stderr.write(f"figure\t{path}\n")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    strict = args.strict or args.command == "selftest" or strict_mode_enabled()
    try:
        with strict_intervals(strict):
            cert = COMMANDS[args.command](args)
    except MinkError as exc:
        code = 2 if isinstance(exc, Undecided) else exc.exit_code
        sys.stderr.write(f"error\t{type(exc).__name__}\t{exc}\n")
        return code
    _emit(cert, args)
    return EXIT.get(cert["verdict"], 1)


if __name__ == "__main__":
    sys.exit(main())
