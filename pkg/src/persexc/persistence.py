"""Barcodes by boundary-matrix column reduction.

The filtration order is (level, dimension, lexicographic).  Relative
barcodes of (X, A) drop the simplices of A from the matrix, which realises
the quotient complex C(X)/C(A) with the induced filtration.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from math import inf
from typing import Optional

from .complex_core import FilteredComplex, SubcomplexSpec, faces

__all__ = ["Barcode", "ReducedMatrix", "reduce", "barcode", "barcodes", "betti_from_barcode"]


@dataclass(frozen=True)
class ReducedMatrix:
    order: tuple
    levels: tuple
    columns: tuple  # per column: tuple of (row, coeff) sorted by row, after reduction
    pivots: dict  # low row -> column
    p: int = 2
    n: int = 0

    def low(self, j: int) -> Optional[int]:
        col = self.columns[j]
        return col[-1][0] if col else None

    @property
    def size(self) -> int:
        return len(self.order)


def _boundary_columns(order, p):
    index = {s: t for t, s in enumerate(order)}
    cols = []
    for s in order:
        col = {}
        for t, f in enumerate(faces(s)):
            r = index.get(f)
            if r is not None:
                col[r] = 1 if t % 2 == 0 else p - 1
        cols.append(col)
    return cols


def _reduce_gf2(cols, order, clearing):
    bits = [sum(1 << r for r in c) for c in cols]
    pivots: dict = {}
    if clearing:
        sequence = sorted(range(len(order)), key=lambda j: (-len(order[j]), j))
    else:
        sequence = range(len(order))
    cleared = set()
    for j in sequence:
        if j in cleared:
            bits[j] = 0
            continue
        c = bits[j]
        while c:
            low = c.bit_length() - 1
            other = pivots.get(low)
            if other is None:
                pivots[low] = j
                if clearing:
                    cleared.add(low)
                break
            c ^= bits[other]
        bits[j] = c
    out = []
    for c in bits:
        rows = []
        while c:
            low = c & -c
            rows.append((low.bit_length() - 1, 1))
            c ^= low
        out.append(tuple(rows))
    return out, pivots


def _reduce_modp(cols, order, p, clearing):
    pivots: dict = {}
    if clearing:
        sequence = sorted(range(len(order)), key=lambda j: (-len(order[j]), j))
    else:
        sequence = range(len(order))
    cleared = set()
    work = [dict(c) for c in cols]
    for j in sequence:
        if j in cleared:
            work[j] = {}
            continue
        c = work[j]
        while c:
            low = max(c)
            other = pivots.get(low)
            if other is None:
                pivots[low] = j
                if clearing:
                    cleared.add(low)
                break
            oc = work[other]
            factor = (c[low] * pow(oc[low], p - 2, p)) % p
            for r, v in oc.items():
                nv = (c.get(r, 0) - factor * v) % p
                if nv:
                    c[r] = nv
                else:
                    c.pop(r, None)
    return [tuple(sorted(c.items())) for c in work], pivots


def reduce(
    X: FilteredComplex, relative_to: Optional[SubcomplexSpec] = None, *, p: int = 2, clearing: bool = False
) -> ReducedMatrix:
    """Standard left-to-right column reduction (optionally with clearing)."""
    excluded = relative_to.members if relative_to is not None else frozenset()
    lv = X.levels
    order = tuple(s for s in X.filtration_order() if s not in excluded)
    cols = _boundary_columns(order, p)
    if p == 2:
        reduced, pivots = _reduce_gf2(cols, order, clearing)
    else:
        reduced, pivots = _reduce_modp(cols, order, p, clearing)
    R = ReducedMatrix(order, tuple(lv[s] for s in order), tuple(reduced), pivots, p, X.n)
    assert len({R.low(j) for j in range(len(order)) if R.columns[j]}) == len(pivots), "pivots not unique"
    return R


@dataclass(frozen=True)
class Barcode:
    """Multiset of half-open bars [birth, death) in one degree; death may be inf."""

    degree: int
    bars: tuple  # sorted ((birth, death), multiplicity)

    @classmethod
    def from_intervals(cls, degree: int, intervals) -> "Barcode":
        counts = Counter((int(b), d if d == inf else int(d)) for b, d in intervals)
        return cls(degree, tuple(sorted(counts.items())))

    def __len__(self) -> int:
        return sum(m for _, m in self.bars)

    def intervals(self) -> list:
        return [bd for bd, m in self.bars for _ in range(m)]

    def alive_at(self, t: int) -> int:
        return sum(m for (b, d), m in self.bars if b <= t < d)

    def to_text(self) -> str:
        lines = [f"degree {self.degree}"]
        for (b, d), m in self.bars:
            lines.append(f"{b} {'inf' if d == inf else d} {m}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "bars": [{"birth": b, "death": None if d == inf else d, "multiplicity": m} for (b, d), m in self.bars],
        }

    def diagram(self) -> list:
        """Persistence diagram coordinates (birth, death) with multiplicity."""
        return [(b, "inf" if d == inf else d, m) for (b, d), m in self.bars]

    @classmethod
    def from_text(cls, text: str) -> "Barcode":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or not lines[0].startswith("degree "):
            raise ValueError("barcode text must start with 'degree <k>'")
        degree = int(lines[0].split()[1])
        counts = Counter()
        for ln in lines[1:]:
            b, d, m = ln.split()
            counts[(int(b), inf if d == "inf" else int(d))] += int(m)
        return cls(degree, tuple(sorted(counts.items())))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def barcode(R: ReducedMatrix, k: int) -> Barcode:
    intervals = []
    paired_rows = set(R.pivots)
    for j, s in enumerate(R.order):
        if len(s) - 1 != k:
            continue
        if R.columns[j]:
            continue  # j kills a class in degree k-1
        if j in paired_rows:
            d = R.levels[R.pivots[j]]
            if d > R.levels[j]:
                intervals.append((R.levels[j], d))
        else:
            intervals.append((R.levels[j], inf))
    return Barcode.from_intervals(k, intervals)


def barcodes(X: FilteredComplex, relative_to: Optional[SubcomplexSpec] = None, *, max_dim: int = 3, p: int = 2) -> list:
    R = reduce(X, relative_to, p=p)
    return [barcode(R, k) for k in range(max_dim + 1)]


def betti_from_barcode(bc: Barcode, i: int, j: int) -> int:
    """Number of bars born at or before i and still alive at j."""
    if i > j:
        raise ValueError(f"persistent Betti number needs i <= j, got {i} > {j}")
    return sum(m for (b, d), m in bc.bars if b <= i and d > j)
