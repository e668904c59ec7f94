"""Archimedean places as certified root enclosures, and the Galois action on them.

Roots of the minimal polynomial are approximated with mpmath's ``polyroots``
and then certified a posteriori with Weierstrass inclusion disks: for a
monic p of degree n and distinct approximations z_1..z_n, every connected
component of the union of the disks D(z_i, n|p(z_i)/prod_{j!=i}(z_i-z_j)|)
holds as many roots as disks.  When the disks are pairwise disjoint each one
isolates exactly one root.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

import mpmath
from mpmath import libmp as L

from .errors import StructureViolation, Undecided
from .field import FieldElement, NumberField
from .numcore.interval import ComplexInterval, Interval, Sign

if TYPE_CHECKING:
    from .galois import GaloisGroup


@dataclass(frozen=True)
class Place:
    index: int
    root: ComplexInterval  # representative root; imaginary part >= 0
    is_real: bool

    @property
    def local_degree(self) -> int:
        return 1 if self.is_real else 2

    def describe(self) -> str:
        re = mpmath.nstr(self.root.real.mid, 12)
        if self.is_real:
            return f"real place at {re}"
        im = mpmath.nstr(self.root.imag.mid, 12)
        return f"complex place at {re} ± {im}i"


@dataclass(frozen=True)
class _Disk:
    box: ComplexInterval
    place: int
    conjugated: bool


class PlaceSet:
    """All archimedean places of a field, enclosed at a fixed working precision."""

    def __init__(self, field: NumberField, places: Sequence[Place], disks: Sequence[_Disk], bits: int):
        self.field = field
        self.places = tuple(places)
        self._disks = tuple(disks)
        self.bits = bits
        degrees = {p.local_degree for p in self.places}
        if len(degrees) != 1:
            raise StructureViolation("a Galois field has places of a single local degree")
        if sum(p.local_degree for p in self.places) != field.degree:
            raise StructureViolation("local degrees do not add up to the field degree")

    @property
    def N(self) -> int:
        return len(self.places)

    def __len__(self):
        return len(self.places)

    def __iter__(self):
        return iter(self.places)

    def __getitem__(self, i) -> Place:
        return self.places[i]

    @property
    def totally_real(self) -> bool:
        return self.places[0].is_real

    @property
    def local_degree(self) -> int:
        return self.places[0].local_degree

    def root_boxes(self) -> list[ComplexInterval]:
        """Enclosures of all ``degree`` roots (representatives first, then conjugate)."""
        return [d.box for d in self._disks]

    def embed(self, alpha: FieldElement, w: int) -> ComplexInterval:
        return evaluate(alpha.poly, self.places[w].root)

    def embed_root(self, alpha: FieldElement, root_index: int) -> ComplexInterval:
        return evaluate(alpha.poly, self._disks[root_index].box)

    def match_root(self, z: ComplexInterval) -> int:
        """Index into :meth:`root_boxes` of the unique box meeting ``z``."""
        hits = [i for i, d in enumerate(self._disks) if d.box.overlaps(z)]
        if len(hits) != 1:
            raise Undecided(f"root match ambiguous ({len(hits)} candidates)")
        return hits[0]

    def match_place(self, z: ComplexInterval) -> int:
        return self._disks[self.match_root(z)].place

    def root_place(self, root_index: int) -> int:
        return self._disks[root_index].place

    def refine(self, bits: int) -> "PlaceSet":
        """Recompute at ``bits`` while keeping this set's place ordering."""
        if bits == self.bits:
            return self
        fresh = compute_places(self.field, bits)
        order = []
        for p in self.places:
            hits = [q.index for q in fresh.places if q.root.overlaps(p.root)]
            if len(hits) != 1:
                raise Undecided("refined places do not match the previous ones")
            order.append(hits[0])
        remap = {old: new for new, old in enumerate(order)}
        places = [Place(i, fresh.places[j].root, fresh.places[j].is_real) for i, j in enumerate(order)]
        disks = sorted(
            (_Disk(d.box, remap[d.place], d.conjugated) for d in fresh._disks),
            key=lambda d: (d.place, d.conjugated),
        )
        return PlaceSet(self.field, places, disks, bits)


def evaluate(poly, z: ComplexInterval) -> ComplexInterval:
    """Horner evaluation of a rational polynomial at a complex enclosure."""
    prec = z.prec
    if not poly:
        return ComplexInterval.exact(0, 0, prec)
    acc = ComplexInterval(Interval.exact(poly[-1], prec))
    for c in reversed(poly[:-1]):
        acc = acc * z + c
    return acc


def _point(raw, prec) -> Interval:
    return Interval(raw, raw, prec)


def _isolate(field: NumberField, bits: int) -> list[tuple[ComplexInterval, Interval]]:
    """Approximate roots plus certified inclusion radii."""
    ctx = mpmath.MPContext()
    ctx.prec = bits + 16
    coeffs = [int(c) for c in reversed(field.min_poly)]
    try:
        approx = ctx.polyroots(coeffs, maxsteps=200 + 4 * bits, extraprec=bits)
    except ctx.NoConvergence as exc:
        raise Undecided(f"root approximation did not converge: {exc}") from exc
    n = field.degree
    pts = [
        ComplexInterval(
            _point(L.mpf_pos(ctx.mpc(z).real._mpf_, bits, "n"), bits),
            _point(L.mpf_pos(ctx.mpc(z).imag._mpf_, bits, "n"), bits),
        )
        for z in approx
    ]
    poly = field.poly
    out = []
    for i, z in enumerate(pts):
        denom = ComplexInterval.exact(1, 0, bits)
        for j, y in enumerate(pts):
            if j != i:
                denom = denom * (z - y)
        d2 = denom.abs_squared()
        if d2.contains_zero():
            raise Undecided("coincident root approximations")
        w = (evaluate(poly, z).abs_squared() / d2).sqrt() * n
        out.append((z, Interval(w._hi, w._hi, bits)))
    return out


def _box(z: ComplexInterval, r: Interval) -> ComplexInterval:
    return ComplexInterval(
        Interval(L.mpf_sub(z.real._lo, r._hi, z.prec, "f"), L.mpf_add(z.real._hi, r._hi, z.prec, "c"), z.prec),
        Interval(L.mpf_sub(z.imag._lo, r._hi, z.prec, "f"), L.mpf_add(z.imag._hi, r._hi, z.prec, "c"), z.prec),
    )


def _order_key(a: ComplexInterval, b: ComplexInterval) -> int:
    # descending real part, then descending imaginary part
    if not a.real.overlaps(b.real):
        return -1 if (a.real - b.real).sign() is Sign.POSITIVE else 1
    if not a.imag.overlaps(b.imag):
        return -1 if (a.imag - b.imag).sign() is Sign.POSITIVE else 1
    raise Undecided("cannot order two root enclosures")


@functools.lru_cache(maxsize=64)
def compute_places(field: NumberField, bits: int = 128) -> PlaceSet:
    """Certified isolation of all roots, grouped into archimedean places."""
    isolated = _isolate(field, bits)
    boxes = [_box(z, r) for z, r in isolated]
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if boxes[i].overlaps(boxes[j]):
                raise Undecided("root enclosures are not separated")
    reals, uppers, lowers = [], [], []
    for i, (z, r) in enumerate(isolated):
        im_excess = abs(z.imag) - r
        if im_excess.sign() is Sign.POSITIVE:
            (uppers if z.imag.sign() is Sign.POSITIVE else lowers).append(i)
            continue
        # symmetric disk around Re z containing D(z, r)
        grown = Interval(L.mpf_add(r._hi, abs(z.imag)._hi, bits, "c"), L.mpf_add(r._hi, abs(z.imag)._hi, bits, "c"), bits)
        sym = _box(ComplexInterval(z.real), grown)
        if any(sym.overlaps(boxes[j]) for j in range(len(boxes)) if j != i):
            raise Undecided("cannot decide whether a root is real")
        reals.append((i, sym))
    if reals and uppers:
        raise StructureViolation("field is neither totally real nor totally complex")
    if reals:
        reps = [(sym, True, None) for _, sym in reals]
    else:
        if len(uppers) != len(lowers):
            raise Undecided("conjugate pairing failed")
        reps = []
        for i in uppers:
            mirror = boxes[i].conjugate()
            partners = [j for j in lowers if boxes[j].overlaps(mirror)]
            if len(partners) != 1:
                raise Undecided("conjugate pairing failed")
            reps.append((boxes[i], False, boxes[partners[0]]))
    reps.sort(key=functools.cmp_to_key(lambda a, b: _order_key(a[0], b[0])))
    places, disks = [], []
    for idx, (box, is_real, conj_box) in enumerate(reps):
        places.append(Place(idx, box, is_real))
        disks.append(_Disk(box, idx, False))
        if conj_box is not None:
            disks.append(_Disk(conj_box, idx, True))
    return PlaceSet(field, places, disks, bits)


def act_on_place(group: "GaloisGroup", g: int, w: int, places: PlaceSet) -> int:
    """Index of the place σw, the place of the embedding φ_w∘σ⁻¹."""
    inv_image = group.automorphism(group.inverse(g)).image
    return places.match_place(places.embed(inv_image, w))


def place_action(group: "GaloisGroup", places: PlaceSet) -> tuple[tuple[int, ...], ...]:
    """Table ``t[g][w]`` = index of σ_g w; verified to be a group action."""
    table = tuple(
        tuple(act_on_place(group, g, w, places) for w in range(places.N)) for g in range(group.order)
    )
    for w in range(places.N):
        if table[0][w] != w:
            raise StructureViolation("identity does not fix every place")
    for a in range(group.order):
        for b in range(group.order):
            ab = group.mul(a, b)
            for w in range(places.N):
                if table[ab][w] != table[a][table[b][w]]:
                    raise StructureViolation("place action is not compatible with composition")
    return table


def stabilizer(group: "GaloisGroup", places: PlaceSet, w: int, action=None) -> tuple[int, ...]:
    action = action or place_action(group, places)
    stab = tuple(g for g in range(group.order) if action[g][w] == w)
    expected = 1 if places[w].is_real else 2
    if len(stab) != expected:
        raise StructureViolation(f"stabilizer has order {len(stab)}, expected {expected}")
    if expected == 2 and group.mul(stab[1], stab[1]) != 0:
        raise StructureViolation("complex conjugation does not square to the identity")
    return stab


def fiber_over_subfield(
    places: PlaceSet, k_generator: FieldElement, group: "GaloisGroup" | None = None, H=None
) -> list[tuple[int, ...]]:
    """Partition the places of l by the place of k they lie over.

    Places are grouped by the certified value of the embedded generator of k
    (taken up to complex conjugation).  When a group and H are given, the
    grouping is cross-checked against the H-orbits on places.
    """
    values = []
    for w in range(places.N):
        z = places.embed(k_generator, w)
        # canonical representative up to conjugation: imaginary part >= 0
        values.append(ComplexInterval(z.real, abs(z.imag)))
    fibers: list[list[int]] = []
    for w, v in enumerate(values):
        home = [f for f in fibers if values[f[0]].overlaps(v)]
        if len(home) > 1:
            raise Undecided("fiber assignment ambiguous")
        if home:
            home[0].append(w)
        else:
            fibers.append([w])
    # distinct fibers must be certified apart
    for a in range(len(fibers)):
        for b in range(a + 1, len(fibers)):
            if values[fibers[a][0]].overlaps(values[fibers[b][0]]):
                raise Undecided("fibers not separated")
    for f in fibers:
        for w in f[1:]:
            if not _same_value(values[f[0]], values[w]):
                raise Undecided("fiber members not certified equal")
    sizes = {len(f) for f in fibers}
    if len(sizes) != 1:
        raise StructureViolation("fibers over a Galois subfield must have equal size")
    result = [tuple(f) for f in fibers]
    if group is not None and H is not None:
        action = place_action(group, places)
        orbits = sorted({tuple(sorted({action[h][w] for h in H})) for w in range(places.N)})
        if sorted(result) != orbits:
            raise StructureViolation("fibers disagree with the H-orbits on places")
    return result


def _same_value(a: ComplexInterval, b: ComplexInterval) -> bool:
    # values of one algebraic number at places over one place of k coincide
    # exactly; overlap is all an enclosure can show, separation would refute it
    return a.overlaps(b)
