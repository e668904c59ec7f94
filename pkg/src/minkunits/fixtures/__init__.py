"""Field fixtures: a minimal polynomial, verified units, and named subfield generators."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..errors import InvalidFixture
from ..field import FieldElement, NumberField
from ..numcore.poly import as_fraction

BUNDLED = ("sqrt2", "sqrt3", "sqrt5", "biquad", "zeta5", "zeta20")


@dataclass(frozen=True)
class Fixture:
    field: NumberField
    units: tuple[FieldElement, ...]
    subfields: dict = field(default_factory=dict)
    source: str = ""

    @property
    def label(self) -> str:
        return self.field.label


def parse_fixture(data: dict, source: str = "") -> Fixture:
    label = source or "fixture"
    try:
        label = str(data["label"])
        poly = tuple(int(c) for c in data["min_poly"])
        K = NumberField(poly, label)
        units = tuple(_element(K, u) for u in data.get("units", []))
        subfields = {str(s["label"]): _element(K, s["generator"]) for s in data.get("subfields", [])}
    except InvalidFixture:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidFixture(f"malformed fixture {label!r}: {exc}") from exc
    for i, u in enumerate(units):
        if not u.is_unit():
            raise InvalidFixture(f"fixture unit {i} ({u}) is not a unit")
    return Fixture(K, units, subfields, source)


def _element(K: NumberField, coeffs) -> FieldElement:
    if len(coeffs) != K.degree:
        raise InvalidFixture(f"element needs {K.degree} coordinates, got {len(coeffs)}")
    return K.element([as_fraction(c) for c in coeffs])


def load_fixture(name_or_path: str | Path) -> Fixture:
    """Load a bundled fixture by name (``"biquad"``) or any fixture file by path."""
    path = Path(name_or_path)
    if path.suffix == ".json" and path.exists():
        text, source = path.read_text(), str(path)
    else:
        stem = path.stem if path.suffix == ".json" else str(name_or_path)
        if stem not in BUNDLED:
            raise InvalidFixture(f"no fixture file or bundled fixture named {name_or_path!r}")
        text = resources.files(__package__).joinpath(f"{stem}.json").read_text()
        source = f"bundled:{stem}"
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidFixture(f"{source}: not valid JSON ({exc})") from exc
    return parse_fixture(data, source)
