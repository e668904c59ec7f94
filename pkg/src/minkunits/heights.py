"""Normalized absolute values, Weil height and regulators of unit systems.

Normalization: |α|_w = ‖φ_w(α)‖^(d_w/d) with d_w the local degree, so the
archimedean logs of a unit sum to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DivisionByZero, NotAUnit, RankDeficient, SingularWithinTolerance
from .field import FieldElement
from .matrixlab import IntervalMatrix, interval_det
from .numcore.interval import Interval
from .places import PlaceSet


def log_norm(alpha: FieldElement, places: PlaceSet, w: int) -> Interval:
    """log‖φ_w(α)‖, the unnormalized log of the complex modulus."""
    if alpha.is_zero():
        raise DivisionByZero("log of zero")
    return places.embed(alpha, w).log_abs()


def log_abs(alpha: FieldElement, places: PlaceSet, w: int) -> Interval:
    """(d_w/d)·log‖φ_w(α)‖."""
    d = alpha.field.degree
    return log_norm(alpha, places, w) * Fraction(places[w].local_degree, d)


def log_vector(alpha: FieldElement, places: PlaceSet) -> list[Interval]:
    return [log_abs(alpha, places, w) for w in range(places.N)]


def weil_height(alpha: FieldElement, places: PlaceSet, check_unit: bool = True) -> Interval:
    """h(α) = ½ Σ_w |log|α|_w| over archimedean places, valid for units."""
    if check_unit and not alpha.is_unit():
        raise NotAUnit(f"{alpha} is not a unit; its finite places would contribute")
    total = Interval.exact(0, places.bits)
    for x in log_vector(alpha, places):
        total = total + abs(x)
    return total * Fraction(1, 2)


def log_matrix(units: Sequence[FieldElement], places: PlaceSet) -> IntervalMatrix:
    """Rows indexed by places, columns by units, entries log|η|_w."""
    cols = [log_vector(u, places) for u in units]
    return IntervalMatrix([[c[w] for c in cols] for w in range(places.N)])


@dataclass
class Regulator:
    standard: Interval  # |det(d_w log‖η_j‖_w)| over N-1 places
    normalized: Interval  # |det(log|η_j|_w)| = standard / d^(N-1)
    factor: int  # d^(N-1)
    dropped_place: int

    def to_json(self) -> dict:
        return {
            "standard": self.standard.to_json(),
            "normalized": self.normalized.to_json(),
            "conversion_factor": self.factor,
            "dropped_place": self.dropped_place,
            "convention": "standard rows d_w*log||.||_w; normalized rows (d_w/d)*log||.||_w",
        }


def regulator(units: Sequence[FieldElement], places: PlaceSet, drop: int | None = None) -> Regulator:
    """Regulator of N-1 units, in both conventions.

    Raises SingularWithinTolerance (an Undecided) when the determinant
    enclosure still contains zero, so the caller can escalate precision.
    """
    N = places.N
    if len(units) != N - 1:
        raise RankDeficient(f"need {N - 1} units, got {len(units)}")
    drop = N - 1 if drop is None else drop
    keep = [w for w in range(N) if w != drop]
    d = places.field.degree
    factor = d ** (N - 1)
    if N == 1:
        one = Interval.exact(1, places.bits)
        return Regulator(one, one, 1, drop)
    rows = [[log_norm(u, places, w) * places[w].local_degree for u in units] for w in keep]
    det = interval_det(IntervalMatrix(rows))
    if det.contains_zero():
        raise SingularWithinTolerance("regulator determinant encloses zero")
    std = abs(det)
    return Regulator(std, std / factor, factor, drop)


def lattice_index_bound(
    sub_units: Sequence[FieldElement], full_units: Sequence[FieldElement], places: PlaceSet
) -> Interval:
    """Reg(sub)/Reg(full): the index of the sublattice in the lattice of ``full_units``."""
    return regulator(sub_units, places).standard / regulator(full_units, places).standard
