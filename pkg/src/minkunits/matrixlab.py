"""Certified matrix algorithms over interval entries.

Contents: an integer point solver for 0 < Aξ <= (row sums of |A|), rank
certification through nonvanishing minors, and three structural checks
(nonsingularity from sign patterns, constancy of signed cofactors, and the
sign of a kernel vector).
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import HypothesisViolated, IterationCapExceeded, Undecided
from .numcore import exact
from .numcore.interval import Interval, Sign, Verdict, compare_le, interval_sign


class IntervalMatrix:
    """Rectangular matrix of :class:`Interval` entries."""

    def __init__(self, rows: Sequence[Sequence[Interval]]):
        self.rows = tuple(tuple(r) for r in rows)
        if self.rows and len({len(r) for r in self.rows}) != 1:
            raise ValueError("ragged matrix")

    @classmethod
    def from_values(cls, rows, prec: int = 128) -> "IntervalMatrix":
        """Exact enclosures of ints, Fractions, decimal strings or binary floats."""
        return cls([[x if isinstance(x, Interval) else Interval.exact(x, prec) for x in r] for r in rows])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    @property
    def prec(self) -> int:
        return max((x.prec for r in self.rows for x in r), default=128)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def is_exact(self) -> bool:
        return all(x.is_point() for r in self.rows for x in r)

    def to_fractions(self) -> list[list[Fraction]]:
        if not self.is_exact():
            raise ValueError("matrix has non-degenerate entries")
        return [[x.endpoints_fraction()[0] for x in r] for r in self.rows]

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "IntervalMatrix":
        cols = list(cols)
        return IntervalMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def minor(self, m: int, n: int) -> "IntervalMatrix":
        r, c = self.shape
        return self.submatrix([i for i in range(r) if i != m], [j for j in range(c) if j != n])

    def transpose(self) -> "IntervalMatrix":
        return IntervalMatrix(list(zip(*self.rows)))

    def row_sums(self) -> list[Interval]:
        return [_sum(r) for r in self.rows]

    def column_sums(self) -> list[Interval]:
        return [_sum(c) for c in zip(*self.rows)]

    def abs_row_sums(self) -> list[Interval]:
        return [_sum(abs(x) for x in r) for r in self.rows]

    def matvec(self, v: Sequence) -> list[Interval]:
        return [_sum(a * x for a, x in zip(r, v)) for r in self.rows]

    def to_json(self) -> list:
        return [[x.to_json() for x in r] for r in self.rows]


def _sum(items) -> Interval:
    items = list(items)
    total = items[0]
    for x in items[1:]:
        total = total + x
    return total


# -- determinants and solves ---------------------------------------------

def interval_det(M: IntervalMatrix) -> Interval:
    """Enclosure of det M by cofactor expansion with memoised column subsets.

    Division free, so it never fails on singular input; cost is O(n 2^n).
    """
    n, m = M.shape
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Interval.exact(1, 128)
    rows = M.rows

    @functools.lru_cache(maxsize=None)
    def det_from(k: int, cols: tuple[int, ...]) -> Interval:
        if k == n - 1:
            return rows[k][cols[0]]
        total = None
        for pos, c in enumerate(cols):
            a = rows[k][c]
            if a.is_exact_zero():
                continue
            term = a * det_from(k + 1, cols[:pos] + cols[pos + 1 :])
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        return total if total is not None else Interval.exact(0, M.prec)

    return det_from(0, tuple(range(n)))


def interval_solve(A: IntervalMatrix, b: Sequence) -> list[Interval]:
    """Enclosure of A⁻¹b; exact rational solve when every input is a point."""
    prec = A.prec
    b = [x if isinstance(x, Interval) else Interval.exact(x, prec) for x in b]
    if A.is_exact() and all(x.is_point() for x in b):
        sol = exact.solve(A.to_fractions(), [x.endpoints_fraction()[0] for x in b])
        return [Interval.exact(x, prec) for x in sol]
    # Cramer's rule on interval determinants: rigorous and adequate for n <= 8
    d = interval_det(A)
    if d.contains_zero():
        raise Undecided("matrix not certified nonsingular")
    n = A.shape[0]
    out = []
    for i in range(n):
        rows = [list(r) for r in A.rows]
        for r in range(n):
            rows[r][i] = b[r]
        out.append(interval_det(IntervalMatrix(rows)) / d)
    return out


def interval_inverse(A: IntervalMatrix) -> IntervalMatrix:
    n = A.shape[0]
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        cols.append(interval_solve(A, e))
    return IntervalMatrix([[cols[j][i] for j in range(n)] for i in range(n)])


# -- Lemma: positive integer point --------------------------------------

@dataclass
class IntegerPoint:
    xi: tuple[int, ...]
    method: str  # "iteration" or "box-search"
    l: int | None
    candidates_tried: int
    products: list  # enclosures of (Aξ)_m
    bounds: list  # enclosures of Σ_n |a_mn|

    def to_json(self) -> dict:
        return {
            "xi": list(self.xi),
            "method": self.method,
            "l": self.l,
            "candidates_tried": self.candidates_tried,
            "products": [x.to_json() for x in self.products],
            "bounds": [x.to_json() for x in self.bounds],
        }


def _round_half_away(x: Fraction) -> int:
    f = math.floor(abs(x) + Fraction(1, 2))
    return f if x >= 0 else -f


def check_integer_point(A: IntervalMatrix, xi: Sequence[int]) -> tuple[Verdict, list, list]:
    """Certified verdict for 0 < (Aξ)_m <= Σ_n |a_mn| for every row m.

    The upper inequality is rewritten as Σ_n (|a_mn| - a_mn ξ_n) >= 0.  A term
    with |ξ_n| <= 1, or with ξ_n of sign opposite to a certified-signed a_mn,
    is nonnegative for every real a_mn in its enclosure, so its lower end is
    clipped at 0; this settles equality cases such as ξ = (−1) for A = (a), a < 0.
    """
    products = A.matvec(xi)
    bounds = A.abs_row_sums()
    undecided = False
    for m, row in enumerate(A.rows):
        s = interval_sign(products[m])
        if s is Sign.NEGATIVE or products[m].is_exact_zero():
            return Verdict.FAILS, products, bounds
        if s is Sign.UNDECIDED:
            undecided = True
        slack = None
        for a, x in zip(row, xi):
            term = abs(a) - a * x
            structural = abs(x) <= 1 or (x != 0 and _sign_opposes(a, x))
            if structural and term.sign() is not Sign.POSITIVE:
                term = Interval(_zero_raw(), term._hi, term.prec)
            slack = term if slack is None else slack + term
        v = compare_le(0, slack)
        if v is Verdict.FAILS:
            return Verdict.FAILS, products, bounds
        if v is Verdict.TIGHT:
            undecided = True
    return (Verdict.TIGHT if undecided else Verdict.HOLDS), products, bounds


def _zero_raw():
    from mpmath import libmp

    return libmp.fzero


def _sign_opposes(a: Interval, x: int) -> bool:
    s = a.sign()
    return (s is Sign.POSITIVE and x < 0) or (s is Sign.NEGATIVE and x > 0)


def positive_integer_point(A: IntervalMatrix, cap: int = 10**6, box_cap: int = 10**6) -> IntegerPoint:
    """Integer ξ with 0 < Σ_n a_mn ξ_n <= Σ_n |a_mn| for every m.

    Candidates are ξ^(l) = round(A⁻¹u^(l)) with u^(l) = (1/2 + 1/l)·s and
    s the vector of absolute row sums, for l = 1, 2, ...  Only the values of
    l where some coordinate of ξ^(l) changes are visited, which is the same
    candidate sequence as visiting every l.  Each candidate is verified with
    interval bounds before it is returned.
    """
    n, m = A.shape
    if n != m or n == 0:
        raise ValueError("need a nonempty square matrix")
    s = A.abs_row_sums()
    v0_enc = interval_solve(A, s)
    v0 = [x.center_fraction() for x in v0_enc]
    seen: set[tuple[int, ...]] = set()
    undecided = False
    l = 1
    while l <= cap:
        c = Fraction(1, 2) + Fraction(1, l)
        xi = tuple(_round_half_away(c * v) for v in v0)
        if xi not in seen:
            seen.add(xi)
            verdict, products, bounds = check_integer_point(A, xi)
            if verdict is Verdict.HOLDS:
                return IntegerPoint(xi, "iteration", l, len(seen), products, bounds)
            if verdict is Verdict.TIGHT:
                undecided = True
        nxt = _next_breakpoint(v0, xi, l)
        if nxt is None:
            break  # ξ^(l) is constant from here on
        l = nxt
    try:
        return box_search(A, box_cap)
    except IterationCapExceeded:
        if undecided:
            raise Undecided("integer point candidates could not be decided")
        raise


def _next_breakpoint(v0: Sequence[Fraction], xi: Sequence[int], l: int) -> int | None:
    """Smallest l' > l at which round((1/2 + 1/l')·v) changes for some coordinate."""
    best = None
    for v, k in zip(v0, xi):
        k = abs(k)
        v = abs(v)
        if v == 0 or k == 0:
            continue
        # rounding drops below k once (1/2 + 1/l')·v < k - 1/2
        delta = Fraction(2 * k - 1, 2) / v - Fraction(1, 2)
        if delta <= 0:
            continue
        cand = math.floor(1 / delta) + 1
        cand = max(cand, l + 1)
        best = cand if best is None else min(best, cand)
    return best


def box_search(A: IntervalMatrix, cap: int = 10**6) -> IntegerPoint:
    """Exhaustive search of the bounded region 0 < Ax <= s (s = absolute row sums)."""
    n = A.shape[0]
    s = A.abs_row_sums()
    B = interval_inverse(A)
    radii = []
    for i in range(n):
        r = _sum(abs(B[i, j]) * s[j] for j in range(n))
        radii.append(int(math.floor(r.hi)))
    total = math.prod(2 * r + 1 for r in radii)
    if total > cap:
        raise IterationCapExceeded(f"box search would visit {total} points (cap {cap})")
    tried = 0
    undecided = False
    for xi in sorted(itertools.product(*[range(-r, r + 1) for r in radii]), key=lambda x: (sum(map(abs, x)), x)):
        tried += 1
        verdict, products, bounds = check_integer_point(A, xi)
        if verdict is Verdict.HOLDS:
            return IntegerPoint(tuple(xi), "box-search", None, tried, products, bounds)
        undecided |= verdict is Verdict.TIGHT
    if undecided:
        raise Undecided("box search candidates could not be decided")
    raise IterationCapExceeded("no integer point in the search region")


# -- rank ------------------------------------------------------------------

@dataclass
class RankCertificate:
    lower: int
    upper: int
    witness_rows: tuple[int, ...] = ()
    witness_cols: tuple[int, ...] = ()
    witness_det: Interval | None = None
    method: str = ""

    @property
    def certified(self) -> bool:
        return self.lower == self.upper

    @property
    def rank(self) -> int:
        if not self.certified:
            raise Undecided(f"rank only bracketed in [{self.lower}, {self.upper}]")
        return self.lower

    def to_json(self) -> dict:
        return {
            "rank": self.lower if self.certified else None,
            "lower": self.lower,
            "upper": self.upper,
            "witness_rows": list(self.witness_rows),
            "witness_cols": list(self.witness_cols),
            "witness_det": self.witness_det.to_json() if self.witness_det is not None else None,
            "method": self.method,
        }


def certified_rank(A: IntervalMatrix, relations: int = 0) -> RankCertificate:
    """Bracket the rank of A.

    The lower bound comes from an r×r minor whose determinant enclosure
    excludes 0.  The upper bound is exact for point matrices, and otherwise
    min(rows, cols) minus ``relations``, the number of independent linear
    dependencies the caller knows on theoretical grounds (for example zero
    column sums).
    """
    nr, nc = A.shape
    if A.is_exact():
        r = exact.rank(A.to_fractions())
        lower_cert = _find_minor(A, r) if r else ((), (), None)
        return RankCertificate(r, r, *lower_cert, method="exact")
    upper = min(nr, nc) - relations
    for r in range(upper, 0, -1):
        found = _find_minor(A, r)
        if found[2] is not None:
            return RankCertificate(r, upper, *found, method="minor")
    return RankCertificate(0, upper, method="minor")


def _find_minor(A: IntervalMatrix, r: int):
    nr, nc = A.shape
    for rows in itertools.combinations(range(nr), r):
        for cols in itertools.combinations(range(nc), r):
            d = interval_det(A.submatrix(rows, cols))
            if not d.contains_zero():
                return rows, cols, d
    return (), (), None


def all_maximal_minors(A: IntervalMatrix, r: int) -> list[tuple[tuple[int, ...], tuple[int, ...], Interval]]:
    nr, nc = A.shape
    return [
        (rows, cols, interval_det(A.submatrix(rows, cols)))
        for rows in itertools.combinations(range(nr), r)
        for cols in itertools.combinations(range(nc), r)
    ]


# -- structural checks -------------------------------------------------------

@dataclass
class NonsingularCertificate:
    column_sums: list
    determinant: Interval
    structural: bool
    numerical: bool

    def to_json(self) -> dict:
        return {
            "column_sums": [x.to_json() for x in self.column_sums],
            "determinant": self.determinant.to_json(),
            "structural": self.structural,
            "numerical": self.numerical,
        }


def check_minkowski_nonsingular(A: IntervalMatrix) -> NonsingularCertificate:
    """Nonsingularity from positive column sums and negative off-diagonal entries.

    The sign-pattern argument and a determinant enclosure are both required
    to agree.
    """
    n = A.shape[0]
    sums = A.column_sums()
    for j, c in enumerate(sums):
        s = interval_sign(c)
        if s is Sign.UNDECIDED:
            raise Undecided(f"sign of column sum {j} undecided")
        if s is not Sign.POSITIVE:
            raise HypothesisViolated(f"column sum {j} is not positive")
    for i in range(n):
        for j in range(n):
            if i != j:
                s = interval_sign(A[i, j])
                if s is Sign.UNDECIDED:
                    raise Undecided(f"sign of entry ({i},{j}) undecided")
                if s is not Sign.NEGATIVE:
                    raise HypothesisViolated(f"off-diagonal entry ({i},{j}) is not negative")
    det = interval_det(A)
    if det.contains_zero():
        raise Undecided("determinant enclosure contains zero despite the sign pattern")
    return NonsingularCertificate(sums, det, True, True)


def _require_zero_sums(sums, what: str):
    for i, x in enumerate(sums):
        if not x.contains_zero():
            raise HypothesisViolated(f"{what} {i} is certified nonzero")


def signed_cofactors(A: IntervalMatrix) -> list[list[Interval]]:
    n = A.shape[0]
    return [[(interval_det(A.minor(m, k)) * (-1 if (m + k) % 2 else 1)) for k in range(n)] for m in range(n)]


@dataclass
class CofactorCertificate:
    cofactors: list
    mode: str  # "full": one constant; "columnwise": constant down each column
    constants: list  # hull per column (columnwise) or one hull (full)
    nonzero: bool  # every cofactor excludes 0, so the rank is N-1

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "constants": [c.to_json() for c in self.constants],
            "nonzero": self.nonzero,
            "rank_deficient": not self.nonzero,
        }


def check_cofactor_constancy(A: IntervalMatrix) -> CofactorCertificate:
    """Signed cofactors of a matrix with vanishing column sums.

    With vanishing row sums as well, all signed cofactors share one value c;
    with vanishing column sums only, they are constant down each column.
    Agreement is certified as pairwise overlap of enclosures; the value is
    certified nonzero when every enclosure excludes 0, and otherwise the
    degenerate branch (c = 0, rank below N-1) is reported.
    """
    _require_zero_sums(A.column_sums(), "column sum")
    rows_zero = all(x.contains_zero() for x in A.row_sums())
    cof = signed_cofactors(A)
    n = A.shape[0]
    groups = [[x for r in cof for x in r]] if rows_zero else [[cof[m][k] for m in range(n)] for k in range(n)]
    for g in groups:
        for a, b in itertools.combinations(g, 2):
            if not a.overlaps(b):
                raise Undecided("signed cofactors are certified distinct")
    nonzero = all(not x.contains_zero() for g in groups for x in g)
    if not nonzero and any(not x.contains_zero() for g in groups for x in g):
        raise Undecided("some signed cofactors exclude 0 and others do not")
    constants = [Interval.hull(g) for g in groups]
    return CofactorCertificate(cof, "full" if rows_zero else "columnwise", constants, nonzero)


@dataclass
class NullSignCertificate:
    vector: list
    sign: Sign
    residual: list

    def to_json(self) -> dict:
        return {
            "vector": [x.to_json() for x in self.vector],
            "sign": self.sign.name.lower(),
            "residual": [x.to_json() for x in self.residual],
        }


def check_null_sign(A: IntervalMatrix, row: int = 0) -> NullSignCertificate:
    """Kernel vector y_n = (-1)^(v+n) det A_(v,n) and the common sign of its entries.

    Requires vanishing column sums (so det A = 0 and y spans the kernel)
    and negative off-diagonal entries.
    """
    n = A.shape[0]
    _require_zero_sums(A.column_sums(), "column sum")
    for i in range(n):
        for j in range(n):
            if i != j and interval_sign(A[i, j]) is not Sign.NEGATIVE:
                if interval_sign(A[i, j]) is Sign.UNDECIDED:
                    raise Undecided(f"sign of entry ({i},{j}) undecided")
                raise HypothesisViolated(f"off-diagonal entry ({i},{j}) is not negative")
    y = [interval_det(A.minor(row, k)) * (-1 if (row + k) % 2 else 1) for k in range(n)]
    signs = {interval_sign(x) for x in y}
    if Sign.UNDECIDED in signs:
        raise Undecided("kernel vector sign undecided")
    if len(signs) != 1:
        raise HypothesisViolated("kernel vector has mixed signs")
    residual = A.matvec(y)
    if not all(r.contains_zero() for r in residual):
        raise Undecided("A·y does not enclose zero")
    return NullSignCertificate(y, signs.pop(), residual)
