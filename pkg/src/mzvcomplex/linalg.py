"""Exact sparse linear algebra over the rationals.

Vectors are dicts ``{column: Fraction}`` with no stored zeros.  A matrix is a
:class:`SparseMatrix` holding a tuple of such rows and a column count.

Elimination keeps integer rows internally (fraction-free, divided by their
content after every step), so the only rationals that ever appear are the
final normal forms.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

Rational = Fraction
SparseVector = dict


def clean(v: Mapping[int, object]) -> dict[int, Fraction]:
    """Copy ``v`` with Fraction entries and without zeros."""
    return {c: Fraction(x) for c, x in v.items() if x != 0}


@dataclass(frozen=True)
class SparseMatrix:
    rows: tuple
    ncols: int

    def __init__(self, rows: Iterable[Mapping[int, object]], ncols: int):
        rows = tuple(clean(r) for r in rows)
        for r in rows:
            for c in r:
                if not 0 <= c < ncols:
                    raise ValueError(f"column {c} out of range for ncols={ncols}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[object]], ncols: int | None = None):
        if ncols is None:
            ncols = len(dense[0]) if dense else 0
        return cls(({j: x for j, x in enumerate(r)} for r in dense), ncols)

    @classmethod
    def identity(cls, n: int):
        return cls(({i: 1} for i in range(n)), n)

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in self.rows]
        for i, r in enumerate(self.rows):
            for c, x in r.items():
                out[i][c] = x
        return out

    def transpose(self) -> "SparseMatrix":
        cols: list[dict] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for c, x in r.items():
                cols[c][i] = x
        return SparseMatrix(cols, len(self.rows))

    def apply(self, x: Mapping[int, object]) -> dict[int, Fraction]:
        """Matrix-vector product, indexed by row."""
        out = {}
        for i, r in enumerate(self.rows):
            s = sum((a * x[c] for c, a in r.items() if c in x), Fraction(0))
            if s:
                out[i] = s
        return out


def _to_int_row(v: Mapping[int, object]) -> dict[int, int]:
    """Scale a rational vector to a primitive integer vector."""
    v = {c: Fraction(x) for c, x in v.items() if x != 0}
    if not v:
        return {}
    den = 1
    for x in v.values():
        den = den * x.denominator // gcd(den, x.denominator)
    row = {c: int(x * den) for c, x in v.items()}
    return _primitive(row)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            return row
    if g > 1:
        row = {c: x // g for c, x in row.items()}
    return row


class Echelon:
    """Incrementally built echelon basis of a row space.

    ``order`` is a permutation of the columns: pivots are taken at the
    earliest column in that order.  Two different orders give independent
    elimination paths, which the tests use to cross-check ranks.
    """

    def __init__(self, ncols: int, order: Sequence[int] | None = None):
        self.ncols = ncols
        if order is None:
            self._pos = None
        else:
            if sorted(order) != list(range(ncols)):
                raise ValueError("order must be a permutation of the columns")
            self._pos = {c: i for i, c in enumerate(order)}
        # pivot position -> (pivot column, integer row with positive pivot)
        self.pivots: dict[int, tuple[int, dict[int, int]]] = {}

    def _key(self, c: int) -> int:
        return c if self._pos is None else self._pos[c]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def pivot_columns(self) -> list[int]:
        return sorted(c for c, _ in self.pivots.values())

    def free_columns(self) -> list[int]:
        piv = {c for c, _ in self.pivots.values()}
        return [c for c in range(self.ncols) if c not in piv]

    def _reduce_int(self, row: dict[int, int]) -> dict[int, int]:
        """Integer row reduced against the basis, up to a positive scalar."""
        row = dict(row)
        heap = [self._key(c) for c in row]
        heapq.heapify(heap)
        seen = set()
        while heap:
            k = heapq.heappop(heap)
            if k in seen:
                continue
            seen.add(k)
            if k not in self.pivots:
                continue
            c, prow = self.pivots[k]
            a = row.get(c)
            if not a:
                continue
            p = prow[c]
            g = gcd(a, p)
            mp, ma = p // g, a // g
            if mp != 1:
                row = {cc: x * mp for cc, x in row.items()}
            for cc, x in prow.items():
                y = row.get(cc, 0) - ma * x
                if y:
                    if cc not in row:
                        heapq.heappush(heap, self._key(cc))
                    row[cc] = y
                else:
                    row.pop(cc, None)
            row = _primitive(row)
        return row

    def add(self, v: Mapping[int, object]) -> bool:
        """Insert ``v``; return True if it enlarged the span."""
        row = self._reduce_int(_to_int_row(v))
        if not row:
            return False
        c = min(row, key=self._key)
        k = self._key(c)
        if row[c] < 0:
            row = {cc: -x for cc, x in row.items()}
        self.pivots[k] = (c, row)
        return True

    def extend(self, rows: Iterable[Mapping[int, object]]) -> "Echelon":
        for r in rows:
            self.add(r)
        return self

    def contains(self, v: Mapping[int, object]) -> bool:
        return not self._reduce_int(_to_int_row(v))

    def normal_form(self, v: Mapping[int, object]) -> dict[int, Fraction]:
        """The unique representative of ``v`` modulo the span supported on
        free columns only."""
        v = {c: Fraction(x) for c, x in v.items() if x != 0}
        if not v:
            return {}
        heap = [self._key(c) for c in v]
        heapq.heapify(heap)
        seen = set()
        while heap:
            k = heapq.heappop(heap)
            if k in seen:
                continue
            seen.add(k)
            if k not in self.pivots:
                continue
            c, prow = self.pivots[k]
            a = v.get(c)
            if not a:
                continue
            f = a / prow[c]
            for cc, x in prow.items():
                y = v.get(cc, 0) - f * x
                if y:
                    if cc not in v:
                        heapq.heappush(heap, self._key(cc))
                    v[cc] = y
                else:
                    v.pop(cc, None)
        return v

    def reduced(self) -> "Echelon":
        """Back-substitute so every pivot column is zero in the other rows."""
        keys = sorted(self.pivots, reverse=True)
        done: dict[int, tuple[int, dict[int, int]]] = {}
        for k in keys:
            c, row = self.pivots[k]
            row = dict(row)
            for k2 in sorted(done):
                c2, r2 = done[k2]
                a = row.get(c2)
                if not a:
                    continue
                p = r2[c2]
                g = gcd(a, p)
                mp, ma = p // g, a // g
                row = {cc: x * mp for cc, x in row.items()}
                for cc, x in r2.items():
                    y = row.get(cc, 0) - ma * x
                    if y:
                        row[cc] = y
                    else:
                        row.pop(cc, None)
                row = _primitive(row)
            if row[c] < 0:
                row = {cc: -x for cc, x in row.items()}
            done[k] = (c, row)
        out = Echelon.__new__(Echelon)
        out.ncols, out._pos, out.pivots = self.ncols, self._pos, done
        return out

    def rows(self) -> list[dict[int, Fraction]]:
        return [{c: Fraction(x) for c, x in r.items()} for _, r in
                (self.pivots[k] for k in sorted(self.pivots))]


def _echelon(m: SparseMatrix, strategy: str = "leading", seed: int = 0) -> Echelon:
    if strategy == "leading":
        order = None
    elif strategy == "trailing":
        order = list(range(m.ncols - 1, -1, -1))
    elif strategy == "shuffled":
        order = list(range(m.ncols))
        random.Random(seed).shuffle(order)
    else:
        raise ValueError(f"unknown pivot strategy {strategy!r}")
    ech = Echelon(m.ncols, order)
    # sparse rows first keeps fill-in down
    for r in sorted(m.rows, key=len):
        ech.add(r)
    return ech


def rank(m: SparseMatrix, strategy: str = "leading") -> int:
    return _echelon(m, strategy).rank


def nullspace_basis(m: SparseMatrix) -> list[dict[int, Fraction]]:
    ech = _echelon(m).reduced()
    pivrows = {c: r for c, r in ech.pivots.values()}
    basis = []
    for f in ech.free_columns():
        x = {f: Fraction(1)}
        for c, r in pivrows.items():
            a = r.get(f)
            if a:
                x[c] = Fraction(-a, r[c])
        basis.append(x)
    return basis


def in_span(v: Mapping[int, object], rows: SparseMatrix) -> bool:
    if any(not 0 <= c < rows.ncols for c in v):
        raise ValueError("vector index out of range")
    return _echelon(rows).contains(v)


def quotient_dim(ngens: int, relations: SparseMatrix) -> int:
    if relations.ncols != ngens:
        raise ValueError("relation matrix width differs from generator count")
    return ngens - rank(relations)


def modular_rank(m: SparseMatrix, p: int = 2_147_483_647) -> int:
    """Rank over GF(p).  Only a cheap consistency check, never a substitute:
    it can undercount when p divides a minor."""
    pivots: dict[int, dict[int, int]] = {}
    for r in m.rows:
        row = {}
        for c, x in r.items():
            y = x.numerator * pow(x.denominator, -1, p) % p
            if y:
                row[c] = y
        while row:
            c = min(row)
            if c not in pivots:
                inv = pow(row[c], -1, p)
                pivots[c] = {cc: x * inv % p for cc, x in row.items()}
                break
            a = row[c]
            for cc, x in pivots[c].items():
                y = (row.get(cc, 0) - a * x) % p
                if y:
                    row[cc] = y
                else:
                    row.pop(cc, None)
    return len(pivots)


@dataclass
class Quotient:
    """A space of ``ngens`` generators modulo relation rows, with
    coordinates on the free (non-pivot) generators."""

    ngens: int
    echelon: Echelon = field(repr=False)

    @classmethod
    def build(cls, ngens: int, relations: Iterable[Mapping[int, object]]):
        ech = Echelon(ngens)
        for r in relations:
            ech.add(r)
        return cls(ngens, ech)

    @property
    def basis(self) -> list[int]:
        return self.echelon.free_columns()

    @property
    def dim(self) -> int:
        return self.ngens - self.echelon.rank

    def coords(self, v: Mapping[int, object]) -> dict[int, Fraction]:
        """Coordinates of the class of ``v`` indexed by position in
        :attr:`basis`."""
        nf = self.echelon.normal_form(v)
        pos = self._pos()
        return {pos[c]: x for c, x in nf.items()}

    def _pos(self) -> dict[int, int]:
        p = self.__dict__.get("_posmap")
        if p is None:
            p = {c: i for i, c in enumerate(self.basis)}
            self.__dict__["_posmap"] = p
        return p
