"""Per-precision bundle of everything the constructions need about one field."""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .field import FieldElement, NumberField
from .galois import GaloisGroup, Subgroup, recover_automorphisms
from .heights import log_abs, log_vector, weil_height
from .numcore.interval import Interval
from .places import PlaceSet, compute_places, place_action, stabilizer


@dataclass(frozen=True)
class FieldContext:
    field: NumberField
    group: GaloisGroup
    places: PlaceSet
    action: tuple  # action[g][w] = index of σ_g w
    w_hat: int
    K: Subgroup  # stabilizer of ŵ
    T: tuple[int, ...]  # canonical left transversal of K: τ_1 = 1, τ_2, ..., τ_N

    @property
    def bits(self) -> int:
        return self.places.bits

    @property
    def N(self) -> int:
        return self.places.N

    @property
    def degree(self) -> int:
        return self.field.degree

    @property
    def totally_real(self) -> bool:
        return self.places.totally_real

    @property
    def rho(self) -> int | None:
        """The nontrivial element of the stabilizer of ŵ (complex conjugation), if any."""
        return self.K[1] if len(self.K) == 2 else None

    def apply(self, g: int, alpha: FieldElement) -> FieldElement:
        return self.group.apply(g, alpha)

    def log_abs(self, alpha: FieldElement, w: int) -> Interval:
        return log_abs(alpha, self.places, w)

    def log_vector(self, alpha: FieldElement) -> list[Interval]:
        return log_vector(alpha, self.places)

    def height(self, alpha: FieldElement) -> Interval:
        return weil_height(alpha, self.places)

    def row_place(self, m: int) -> int:
        """The place τ_m ŵ."""
        return self.action[self.T[m]][self.w_hat]

    def with_place(self, w_hat: int) -> "FieldContext":
        return field_context(self.field, self.bits, w_hat)


@functools.lru_cache(maxsize=128)
def field_context(field: NumberField, bits: int, w_hat: int = 0) -> FieldContext:
    group = recover_automorphisms(field)
    places = compute_places(field, bits)
    if not 0 <= w_hat < places.N:
        raise IndexError(f"place index {w_hat} out of range 0..{places.N - 1}")
    action = place_action(group, places)
    K = stabilizer(group, places, w_hat, action)
    T = group.left_transversal(K)
    return FieldContext(field, group, places, action, w_hat, K, T)
