"""Print the reference numbers frozen into the test suite.

Uses only the sympy/mpmath oracle in tests/oracle.py; run from the repository
root with ``python3 scripts/oracle_values.py``.
"""

import json
import sys
from pathlib import Path

import mpmath

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import oracle  # noqa: E402

for path in sorted((ROOT / "src" / "minkunits" / "fixtures").glob("*.json")):
    fx = json.loads(path.read_text())
    poly, units = fx["min_poly"], fx["units"]
    print(fx["label"])
    print("  places", len(oracle.places(tuple(poly))))
    print("  norms", [str(oracle.norm(poly, u)) for u in units])
    print("  heights", [mpmath.nstr(oracle.height(poly, u), 25) for u in units])
    print("  regulator", mpmath.nstr(oracle.regulator(poly, units), 25))
with mpmath.workdps(40):
    print("log(1+sqrt2)/2", mpmath.nstr(mpmath.log(1 + mpmath.sqrt(2)) / 2, 30))
    print("log(1+sqrt2)", mpmath.nstr(mpmath.log(1 + mpmath.sqrt(2)), 30))
