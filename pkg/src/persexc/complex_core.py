"""Filtered simplicial complexes, closed subcomplexes and their text formats.

A simplex is a strictly increasing tuple of non-negative vertex ids.  A
filtered complex assigns every simplex an integer level in ``0..n`` such
that faces never appear later than their cofaces, so every stage
``X_i = {s : level(s) <= i}`` is itself a simplicial complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Union

Simplex = tuple  # tuple[int, ...], strictly increasing

__all__ = [
    "Simplex",
    "ComplexError",
    "FilteredComplex",
    "SubcomplexSpec",
    "CoverReport",
    "make_simplex",
    "faces",
    "closure",
    "parse_complex",
    "parse_subcomplex",
    "load_complex",
    "load_subcomplex",
    "format_complex",
    "format_subcomplex",
    "sublevel_filtration",
    "induced_filtration",
    "intersect",
    "union",
    "check_cover",
]


class ComplexError(ValueError):
    """Invalid complex or subcomplex; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def make_simplex(vertices: Iterable[int]) -> Simplex:
    s = tuple(int(v) for v in vertices)
    if not s:
        raise ComplexError("empty simplex")
    if any(v < 0 for v in s):
        raise ComplexError(f"negative vertex id in {s}")
    if any(a >= b for a, b in zip(s, s[1:])):
        raise ComplexError(f"vertices not strictly ascending: {s}")
    return s


def faces(s: Simplex) -> list[Simplex]:
    """Codimension-one faces, in order of the omitted vertex."""
    if len(s) == 1:
        return []
    return [s[:t] + s[t + 1:] for t in range(len(s))]


def closure(simplices: Iterable[Simplex]) -> frozenset:
    out = set()
    for s in simplices:
        for r in range(1, len(s) + 1):
            out.update(combinations(s, r))
    return frozenset(out)


def _simplex_key(s: Simplex) -> tuple:
    return (len(s), s)


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """Finite simplicial complex with a monotone integer level per simplex."""

    levels: Mapping[Simplex, int]
    n: int = -1
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        lv = {tuple(s): int(v) for s, v in self.levels.items()}
        top = max(lv.values(), default=0)
        n = top if self.n < 0 else self.n
        object.__setattr__(self, "levels", MappingProxyType(lv))
        object.__setattr__(self, "n", n)
        if self.validate:
            self.check()

    def check(self) -> None:
        for s, lvl in self.levels.items():
            make_simplex(s)
            if not 0 <= lvl <= self.n:
                raise ComplexError(f"level {lvl} of {s} outside 0..{self.n}")
            for f in faces(s):
                if f not in self.levels:
                    raise ComplexError(f"missing face {f} of {s}")
                if self.levels[f] > lvl:
                    raise ComplexError(f"monotonicity violated: face {f} at level {self.levels[f]} > {s} at {lvl}")

    def __len__(self) -> int:
        return len(self.levels)

    def __contains__(self, s: object) -> bool:
        return s in self.levels

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        return self.n == other.n and dict(self.levels) == dict(other.levels)

    __hash__ = None  # type: ignore[assignment]

    def level(self, s: Simplex) -> int:
        return self.levels[s]

    @property
    def simplices(self) -> list[Simplex]:
        """All simplices, dimension-ascending then lexicographic."""
        return sorted(self.levels, key=_simplex_key)

    @property
    def vertices(self) -> list[int]:
        return sorted(s[0] for s in self.levels if len(s) == 1)

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.levels), default=-1)

    def stage(self, i: int) -> frozenset:
        """Simplex set of X_i."""
        return frozenset(s for s, lvl in self.levels.items() if lvl <= i)

    def filtration_order(self) -> list[Simplex]:
        """Level, then dimension, then lexicographic: a face-respecting total order."""
        return sorted(self.levels, key=lambda s: (self.levels[s], len(s), s))

    def whole(self) -> "SubcomplexSpec":
        return SubcomplexSpec(self, frozenset(self.levels))

    def empty(self) -> "SubcomplexSpec":
        return SubcomplexSpec(self, frozenset())

    def sub(self, simplices: Iterable[Simplex], close: bool = False) -> "SubcomplexSpec":
        members = closure(simplices) if close else frozenset(tuple(s) for s in simplices)
        return SubcomplexSpec(self, members)


@dataclass(frozen=True, eq=False)
class SubcomplexSpec:
    """Closed subcomplex of a filtered complex; levels are inherited."""

    parent: FilteredComplex
    members: frozenset

    def __post_init__(self):
        members = frozenset(tuple(s) for s in self.members)
        object.__setattr__(self, "members", members)
        for s in members:
            if s not in self.parent.levels:
                raise ComplexError(f"simplex {s} is not in the parent complex")
            for f in faces(s):
                if f not in members:
                    raise ComplexError(f"subcomplex not face-closed: {f} missing below {s}")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, s: object) -> bool:
        return s in self.members

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubcomplexSpec):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    __hash__ = None  # type: ignore[assignment]

    def level(self, s: Simplex) -> int:
        return self.parent.levels[s]

    def stage(self, i: int) -> frozenset:
        """A_i = A ∩ X_i."""
        lv = self.parent.levels
        return frozenset(s for s in self.members if lv[s] <= i)


@dataclass(frozen=True)
class CoverReport:
    is_cover: bool
    per_level_cover: tuple
    offending_simplices: tuple

    def to_dict(self) -> dict:
        return {
            "is_cover": self.is_cover,
            "per_level_cover": list(self.per_level_cover),
            "offending_simplices": [list(s) for s in self.offending_simplices],
        }


# ---------------------------------------------------------------------------
# constructions


def sublevel_filtration(simplices: Iterable[Iterable[int]], f: Mapping[int, float]) -> FilteredComplex:
    """Lower-star filtration: a simplex enters at the rank of max f over its vertices."""
    cx = closure(make_simplex(s) for s in simplices)
    missing = sorted({v for s in cx for v in s if v not in f})
    if missing:
        raise ComplexError(f"no function value for vertices {missing}")
    ranks = {v: r for r, v in enumerate(sorted({f[v] for s in cx for v in s}))}
    return FilteredComplex({s: ranks[max(f[v] for v in s)] for s in cx})


def induced_filtration(A: SubcomplexSpec) -> FilteredComplex:
    """A as a standalone filtered complex with A_i = A ∩ X_i."""
    lv = A.parent.levels
    return FilteredComplex({s: lv[s] for s in A.members}, n=A.parent.n, validate=False)


def _same_parent(A: SubcomplexSpec, B: SubcomplexSpec) -> None:
    if A.parent is not B.parent and A.parent != B.parent:
        raise ComplexError("subcomplexes have different parents")


def intersect(A: SubcomplexSpec, B: SubcomplexSpec) -> SubcomplexSpec:
    _same_parent(A, B)
    return SubcomplexSpec(A.parent, A.members & B.members)


def union(A: SubcomplexSpec, B: SubcomplexSpec) -> SubcomplexSpec:
    _same_parent(A, B)
    return SubcomplexSpec(A.parent, A.members | B.members)


def check_cover(X: FilteredComplex, A: SubcomplexSpec, B: SubcomplexSpec) -> CoverReport:
    """Closed-cover condition: every simplex of X lies in A or in B."""
    for S in (A, B):
        if S.parent is not X and S.parent != X:
            raise ComplexError("subcomplex does not belong to the given complex")
    offending = tuple(s for s in X.simplices if s not in A.members and s not in B.members)
    per_level = []
    for i in range(X.n + 1):
        per_level.append(X.stage(i) == (A.stage(i) | B.stage(i)))
    report = CoverReport(not offending, tuple(per_level), offending)
    if report.is_cover:
        assert all(report.per_level_cover), "cover of X did not restrict to a cover of every stage"
    return report


# ---------------------------------------------------------------------------
# text formats


def _int_fields(line: str, lineno: int) -> list[int]:
    parts = line.split(" ")
    try:
        return [int(t) for t in parts]
    except ValueError:
        raise ComplexError(f"malformed line {line!r}", lineno) from None


def parse_complex(text: str) -> FilteredComplex:
    """Parse ``<level> <v0> ... <vk>`` lines into a validated filtered complex."""
    levels: dict = {}
    where: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        nums = _int_fields(line, lineno)
        if len(nums) < 2:
            raise ComplexError(f"expected a level and at least one vertex: {line!r}", lineno)
        lvl = nums[0]
        if lvl < 0:
            raise ComplexError(f"negative level {lvl}", lineno)
        try:
            s = make_simplex(nums[1:])
        except ComplexError as e:
            raise ComplexError(str(e), lineno) from None
        if s in levels:
            raise ComplexError(f"duplicate simplex {s} (first on line {where[s]})", lineno)
        levels[s] = lvl
        where[s] = lineno
    for s, lvl in levels.items():
        for f in faces(s):
            if f not in levels:
                raise ComplexError(f"missing face {f} of {s}", where[s])
            if levels[f] > lvl:
                raise ComplexError(
                    f"monotonicity violated: face {f} at level {levels[f]} (line {where[f]}) above {s} at level {lvl}",
                    where[s],
                )
    return FilteredComplex(levels, validate=False)


def parse_subcomplex(text: str, parent: Optional[FilteredComplex] = None) -> tuple[Optional[str], SubcomplexSpec]:
    """Parse a subcomplex file against ``parent``.

    Returns the ``parent:`` header path (or None) together with the
    subcomplex.  ``load_subcomplex`` resolves the header from disk.
    """
    header = None
    members = []
    where = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("parent:"):
            header = line[len("parent:"):].strip()
            continue
        try:
            s = make_simplex(_int_fields(line, lineno))
        except ComplexError as e:
            raise ComplexError(str(e), lineno) from None
        if s in where:
            raise ComplexError(f"duplicate simplex {s} (first on line {where[s]})", lineno)
        where[s] = lineno
        members.append(s)
    if parent is None:
        raise ComplexError("no parent complex supplied")
    for s in members:
        if s not in parent.levels:
            raise ComplexError(f"simplex {s} is not in the parent complex", where[s])
        for f in faces(s):
            if f not in where:
                raise ComplexError(f"subcomplex not face-closed: missing face {f} of {s}", where[s])
    return header, SubcomplexSpec(parent, frozenset(members))


def load_complex(path: Union[str, Path]) -> FilteredComplex:
    return parse_complex(Path(path).read_text(encoding="utf-8"))


def load_subcomplex(path: Union[str, Path], parent: Optional[FilteredComplex] = None) -> SubcomplexSpec:
    """Load a subcomplex; the parent is read from the ``parent:`` header if not given."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if parent is None:
        header = next(
            (ln.strip()[len("parent:"):].strip() for ln in text.splitlines() if ln.strip().startswith("parent:")),
            None,
        )
        if header is None:
            raise ComplexError(f"{path}: no 'parent:' header and no parent given")
        parent = load_complex(path.parent / header)
    return parse_subcomplex(text, parent)[1]


def format_complex(X: FilteredComplex, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines += [" ".join(map(str, (X.levels[s],) + s)) for s in X.filtration_order()]
    return "\n".join(lines) + "\n"


def format_subcomplex(A: SubcomplexSpec, parent_path: str, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines.append(f"parent: {parent_path}")
    lines += [" ".join(map(str, s)) for s in sorted(A.members, key=_simplex_key)]
    return "\n".join(lines) + "\n"
