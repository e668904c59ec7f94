"""Derive the bundled fixture files from first principles.

Every unit is checked with the exact norm test and every system with a
certified nonzero regulator before it is written.  Run from the repository
root: ``python3 scripts/derive_fixtures.py``.
"""

import itertools
import json
from pathlib import Path

from minkunits.field import NumberField
from minkunits.heights import regulator
from minkunits.places import compute_places

OUT = Path(__file__).resolve().parents[1] / "src" / "minkunits" / "fixtures"


def write(label, poly, units, subfields, note=""):
    K = NumberField(tuple(poly), label)
    P = compute_places(K)
    for u in units:
        assert u.is_unit(), (label, u)
    if units:
        reg = regulator(units[: P.N - 1], P)
        print(f"{label}: regulator {reg.standard}")
    data = {
        "label": label,
        "min_poly": list(poly),
        "units": [u.to_json() for u in units],
        "subfields": [{"label": name, "generator": g.to_json()} for name, g in subfields],
    }
    if note:
        data["note"] = note
    (OUT / f"{label}.json").write_text(_dump(data))


def _dump(data) -> str:
    """Indented JSON with every flat list kept on one line."""
    lines = ["{"]
    items = list(data.items())
    for i, (key, value) in enumerate(items):
        comma = "," if i < len(items) - 1 else ""
        if isinstance(value, list) and value and isinstance(value[0], (list, dict)):
            lines.append(f"  {json.dumps(key)}: [")
            for j, v in enumerate(value):
                c = "," if j < len(value) - 1 else ""
                lines.append(f"    {json.dumps(v)}{c}")
            lines.append(f"  ]{comma}")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(value)}{comma}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def main():
    K = NumberField((-2, 0, 1))
    write("sqrt2", K.min_poly, [1 + K.theta], [])

    K = NumberField((-3, 0, 1))
    write("sqrt3", K.min_poly, [2 + K.theta], [])

    K = NumberField((-1, -1, 1))
    write("sqrt5", K.min_poly, [K.theta], [])

    # θ = √2 + √3
    K = NumberField((1, 0, -10, 0, 1))
    t = K.theta
    r2 = (t**3 - 9 * t) / 2
    r3 = (11 * t - t**3) / 2
    r6 = r2 * r3
    assert r2 * r2 == 2 and r3 * r3 == 3 and r6 * r6 == 6
    write(
        "biquad",
        K.min_poly,
        [1 + r2, (r2 + r6) / 2, r2 + r3],
        [("sqrt2", r2), ("sqrt3", r3), ("sqrt6", r6)],
        note="independent units; not claimed to be a fundamental system",
    )

    # θ = ζ5
    K = NumberField((1, 1, 1, 1, 1))
    t = K.theta
    sqrt5 = 1 + 2 * (t + t**4)
    assert sqrt5 * sqrt5 == 5
    write("zeta5", K.min_poly, [1 + t], [("sqrt5", sqrt5)])

    # θ = ζ20; cyclotomic units 1 - ζ^a and 1 + ζ^a chosen by the exact norm test
    K = NumberField((1, 0, -1, 0, 1, 0, -1, 0, 1))
    t = K.theta
    P = compute_places(K)
    cands = []
    for a in range(1, 10):
        for s in (-1, 1):
            u = 1 + s * t**a
            if u.is_unit() and not u.is_torsion() and u not in cands:
                cands.append(u)
    chosen = None
    for triple in itertools.combinations(cands, 3):
        try:
            regulator(list(triple), P)
        except Exception:
            continue
        chosen = list(triple)
        break
    sqrt5 = 1 + 2 * (t**4 + t**16)
    assert sqrt5 * sqrt5 == 5
    write(
        "zeta20",
        K.min_poly,
        chosen,
        [("sqrt5", sqrt5), ("i", t**5)],
        note="cyclotomic units; independent, not claimed fundamental",
    )


if __name__ == "__main__":
    main()
