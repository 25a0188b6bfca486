"""Mayer-Vietoris and pair sequences at stage, persistent and module level.

A sequence over the degree window k_max >= k >= 0 is a list of terms and
the maps between consecutive terms, ending in the zero map to 0.  The
top term has no incoming map inside the window, so it is only checked
for composite-zero and marked as a boundary position.

Term order:

* Mayer-Vietoris: H_k(A∩B) -> H_k(A)⊕H_k(B) -> H_k(X) -> H_{k-1}(A∩B) -> ...
* pair:           H_k(A) -> H_k(X) -> H_k(X,A) -> H_{k-1}(A) -> ...
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .complex_core import ComplexError, FilteredComplex, SubcomplexSpec, check_cover, intersect
from .gf_linalg import (
    FieldMatrix,
    Subspace,
    block_diag,
    hstack,
    image_basis,
    inverse,
    nullspace,
    rank,
    vstack,
)
from .homology import HomologySpace, induced_map, push_chains, restricted_map, stage_homology

__all__ = [
    "CoverViolation",
    "SequenceSlice",
    "Position",
    "SequenceReport",
    "SequenceContext",
    "classify",
    "mv_stage",
    "mv_persistent",
    "pair_stage",
    "pair_persistent",
    "module_sequence",
    "derive_mv_from_excision",
    "mv_connecting",
    "compare_reports",
]

EXACT = "exact"
CHAIN_ONLY = "chain_complex_only"
NOT_CHAIN = "not_chain_complex"


class CoverViolation(ComplexError):
    """The cover hypothesis fails; ``offending`` lists uncovered simplices."""

    def __init__(self, message: str, offending=()):
        self.offending = tuple(offending)
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class SequenceSlice:
    """One row of spaces and maps; ``maps[t]`` goes from term t to term t+1."""

    names: tuple
    dims: tuple
    maps: tuple
    level: Optional[int] = None

    def __post_init__(self):
        for t, m in enumerate(self.maps):
            assert m.shape == (self.dims[t + 1], self.dims[t]), f"map {t} has shape {m.shape}"


@dataclass(frozen=True)
class Position:
    name: str
    dim: int
    rank_in: int
    rank_out: int
    composite_zero: bool
    im_subset_ker: bool
    exact: Optional[bool]  # None at window boundary

    @property
    def boundary(self) -> bool:
        return self.exact is None

    def to_line(self) -> str:
        ex = "boundary" if self.exact is None else ("y" if self.exact else "n")
        yn = lambda b: "y" if b else "n"  # noqa: E731
        return (
            f"{self.name} dim={self.dim} rank_in={self.rank_in} rank_out={self.rank_out} "
            f"zero={yn(self.composite_zero)} chain={yn(self.im_subset_ker)} exact={ex}"
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "rank_in": self.rank_in,
            "rank_out": self.rank_out,
            "composite_zero": self.composite_zero,
            "im_subset_ker": self.im_subset_ker,
            "exact": "boundary" if self.exact is None else self.exact,
        }


@dataclass(frozen=True)
class SequenceReport:
    positions: tuple
    verdict: str
    label: str = ""

    def to_text(self) -> str:
        lines = [f"# {self.label}"] if self.label else []
        lines += [p.to_line() for p in self.positions]
        lines.append(f"verdict {self.verdict}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"label": self.label, "positions": [p.to_dict() for p in self.positions], "verdict": self.verdict}

    def signature(self) -> list:
        return [(p.dim, p.rank_in, p.rank_out, p.composite_zero, p.im_subset_ker, p.exact) for p in self.positions]

    def nonexact_positions(self) -> list:
        return [p for p in self.positions if p.exact is False]


def classify(seq: SequenceSlice, label: str = "") -> SequenceReport:
    positions = []
    p = seq.maps[0].p if seq.maps else 2
    for t, name in enumerate(seq.names):
        dim = seq.dims[t]
        out = seq.maps[t] if t < len(seq.maps) else FieldMatrix.zeros(0, dim, p)
        r_out = rank(out)
        if t == 0:
            positions.append(Position(name, dim, 0, r_out, True, True, None))
            continue
        inc = seq.maps[t - 1]
        r_in = rank(inc)
        zero = (out @ inc).is_zero()
        # containment checked separately from the composite
        im_in = image_basis(inc)
        contained = im_in.cols == 0 or Subspace(nullspace(out)).contains(im_in)
        exact = zero and r_in + r_out == dim
        positions.append(Position(name, dim, r_in, r_out, zero, contained, exact))
    if not all(q.composite_zero for q in positions):
        verdict = NOT_CHAIN
    elif all(q.exact is not False for q in positions):
        verdict = EXACT
    else:
        verdict = CHAIN_ONLY
    return SequenceReport(tuple(positions), verdict, label)


# ---------------------------------------------------------------------------
# shared homology bookkeeping


class SequenceContext:
    """Caches stage homology of X, A, B, A∩B and the pairs for one triple.

    ``B`` may be None for pair sequences.
    """

    def __init__(self, X: FilteredComplex, A: SubcomplexSpec, B: Optional[SubcomplexSpec] = None, *, p: int = 2):
        self.X, self.A, self.B, self.p = X, A, B, p
        self.AB = intersect(A, B) if B is not None else None
        self._cache: dict = {}
        self._spaces = {
            "X": (X, None),
            "A": (A, None),
            "XA": (X, A),
        }
        if B is not None:
            self._spaces.update({"B": (B, None), "AB": (self.AB, None), "BAB": (B, self.AB)})

    @property
    def n(self) -> int:
        return self.X.n

    def h(self, key: str, i: int, k: int) -> HomologySpace:
        ck = (key, i, k)
        if ck not in self._cache:
            space, rel = self._spaces[key]
            self._cache[ck] = stage_homology(space, i, k, rel, p=self.p)
        return self._cache[ck]

    def inc(self, src: str, dst: str, i: int, k: int, j: Optional[int] = None) -> FieldMatrix:
        """Map induced by inclusion/quotient from ``src`` at level i to ``dst`` at level j."""
        j = i if j is None else j
        ck = ("map", src, dst, i, j, k)
        if ck not in self._cache:
            self._cache[ck] = induced_map(self.h(src, i, k), self.h(dst, j, k))
        return self._cache[ck]

    def require_cover(self, *levels: int) -> None:
        if self.B is None:
            raise ValueError("this sequence needs a second subcomplex B")
        rep = check_cover(self.X, self.A, self.B)
        bad = [i for i in levels if not rep.per_level_cover[i]]
        if bad:
            offending = [s for s in rep.offending_simplices if self.X.levels[s] <= max(bad)]
            raise CoverViolation(f"A and B do not cover X at levels {bad}", offending)


def _boundary_to(ctx: SequenceContext, cycles_of: str, target: str, i: int, k: int, lift: Callable) -> FieldMatrix:
    """Matrix sending each representative of H_k(cycles_of) to the class of a boundary chain."""
    src = ctx.h(cycles_of, i, k)
    if k == 0:
        return FieldMatrix.zeros(0, src.dim, ctx.p)
    dst = ctx.h(target, i, k - 1)
    if src.dim == 0:
        return FieldMatrix.zeros(dst.dim, 0, ctx.p)
    Xi = ctx.h("X", i, k).complex
    chains = lift(src, Xi)
    bnd = Xi.boundary(k) @ chains
    return dst.coordinates(push_chains(bnd, Xi, dst.complex, k - 1))


def mv_connecting(ctx: SequenceContext, i: int, k: int, prefer: str = "A") -> FieldMatrix:
    """H_k(X_i) -> H_{k-1}((A∩B)_i): split z = u + v with u on A, return [∂u].

    Simplices in both A and B go to the side named by ``prefer``.
    """
    first = ctx.A if prefer == "A" else ctx.B

    def lift(src: HomologySpace, Xi):
        keep = [1 if s in first.members else 0 for s in Xi.basis(k)]
        mask = FieldMatrix.from_columns([keep], len(keep), ctx.p) if keep else FieldMatrix.zeros(0, 1, ctx.p)
        u = FieldMatrix._wrap((src.reps.data * mask.data) % ctx.p, ctx.p)
        if prefer == "A":
            return u
        return src.reps - u  # the A-side part is z - v

    return _boundary_to(ctx, "X", "AB", i, k, lift)


def pair_connecting(ctx: SequenceContext, i: int, k: int, rel: str = "XA", sub: str = "A") -> FieldMatrix:
    """H_k(X_i, A_i) -> H_{k-1}(A_i): boundary of a relative cycle, read in A_i."""

    def lift(src: HomologySpace, Xi):
        return push_chains(src.reps, src.complex, Xi, k)

    return _boundary_to(ctx, rel, sub, i, k, lift)


# ---------------------------------------------------------------------------
# term specifications


def _mv_terms(k_max: int) -> list:
    terms = []
    for k in range(k_max, -1, -1):
        terms += [("AB", k), ("A+B", k), ("X", k)]
    return terms


def _pair_terms(k_max: int) -> list:
    terms = []
    for k in range(k_max, -1, -1):
        terms += [("A", k), ("X", k), ("XA", k)]
    return terms


_NAMES = {
    "AB": "H{k}(A∩B)",
    "A+B": "H{k}(A)+H{k}(B)",
    "X": "H{k}(X)",
    "A": "H{k}(A)",
    "XA": "H{k}(X,A)",
}


def _name(term) -> str:
    key, k = term
    return _NAMES[key].format(k=k)


def _dim(ctx: SequenceContext, term, i: int) -> int:
    key, k = term
    if key == "A+B":
        return ctx.h("A", i, k).dim + ctx.h("B", i, k).dim
    return ctx.h(key, i, k).dim


def _vertical(ctx: SequenceContext, term, i: int, j: int) -> FieldMatrix:
    key, k = term
    if key == "A+B":
        return block_diag([ctx.inc("A", "A", i, k, j), ctx.inc("B", "B", i, k, j)], ctx.p)
    return ctx.inc(key, key, i, k, j)


def _mv_horizontal(ctx: SequenceContext, term, i: int, prefer: str = "A") -> FieldMatrix:
    key, k = term
    if key == "AB":
        return vstack([ctx.inc("AB", "A", i, k), ctx.inc("AB", "B", i, k)])
    if key == "A+B":
        return hstack([ctx.inc("A", "X", i, k), -ctx.inc("B", "X", i, k)])
    return mv_connecting(ctx, i, k, prefer)


def _pair_horizontal(ctx: SequenceContext, term, i: int) -> FieldMatrix:
    key, k = term
    if key == "A":
        return ctx.inc("A", "X", i, k)
    if key == "X":
        return ctx.inc("X", "XA", i, k)
    return pair_connecting(ctx, i, k)


def _excision_horizontal(ctx: SequenceContext, term, i: int) -> FieldMatrix:
    """Maps of the Mayer-Vietoris row assembled from the two pair rows and excision.

    (alpha, beta) stacks the inclusion A∩B -> A with the top pair row's
    iota for (B, A∩B); gamma combines iota_A with iota_B; the connecting
    map is partial_B ∘ excision^{-1} ∘ kappa_X.
    """
    key, k = term
    if key == "AB":
        return vstack([ctx.inc("AB", "A", i, k), ctx.inc("AB", "B", i, k)])
    if key == "A+B":
        return hstack([ctx.inc("A", "X", i, k), -ctx.inc("B", "X", i, k)])
    if k == 0:
        return FieldMatrix.zeros(0, ctx.h("X", i, k).dim, ctx.p)
    kappa = ctx.inc("X", "XA", i, k)
    exc = ctx.inc("BAB", "XA", i, k)
    d_b = pair_connecting(ctx, i, k, rel="BAB", sub="AB")
    return d_b @ inverse(exc) @ kappa


def _stage_row(ctx, terms, horizontal, i: int) -> SequenceSlice:
    dims = tuple(_dim(ctx, t, i) for t in terms)
    maps = []
    for t, term in enumerate(terms[:-1]):
        maps.append(horizontal(ctx, term, i))
    # the last term maps to 0
    return SequenceSlice(tuple(_name(t) for t in terms), dims, tuple(maps), level=i)


def _persistent_row(ctx, terms, horizontal, i: int, j: int) -> SequenceSlice:
    if i > j:
        raise ValueError(f"need i <= j, got {i} > {j}")
    vert = [_vertical(ctx, t, i, j) for t in terms]
    dims = tuple(image_basis(v).cols for v in vert)
    maps = []
    for t, term in enumerate(terms[:-1]):
        maps.append(restricted_map(vert[t], horizontal(ctx, term, i), horizontal(ctx, term, j), vert[t + 1]))
    return SequenceSlice(tuple(_name(t) for t in terms), dims, tuple(maps))


def _module_row(ctx, terms, horizontal) -> SequenceSlice:
    levels = range(ctx.n + 1)
    dims = tuple(sum(_dim(ctx, t, i) for i in levels) for t in terms)
    maps = []
    for t, term in enumerate(terms[:-1]):
        maps.append(block_diag([horizontal(ctx, term, i) for i in levels], ctx.p))
    names = tuple(_name(t).replace("H", "𝓗") for t in terms)
    return SequenceSlice(names, dims, tuple(maps))


def _assert_stage_exact(seq: SequenceSlice, what: str) -> SequenceReport:
    for a, b in zip(seq.maps, seq.maps[1:]):
        assert (b @ a).is_zero(), f"{what}: consecutive maps do not compose to zero"
    rep = classify(seq, what)
    assert rep.verdict == EXACT, f"{what}: stage row is not exact:\n{rep.to_text()}"
    return rep


# ---------------------------------------------------------------------------
# public operations


def _ctx(X, A, B=None, p=2, ctx=None) -> SequenceContext:
    return ctx if ctx is not None else SequenceContext(X, A, B, p=p)


def mv_stage(X, A, B, i: int, k_max: int = 1, *, p: int = 2, ctx: Optional[SequenceContext] = None) -> SequenceSlice:
    ctx = _ctx(X, A, B, p, ctx)
    ctx.require_cover(i)
    seq = _stage_row(ctx, _mv_terms(k_max), _mv_horizontal, i)
    _assert_stage_exact(seq, f"Mayer-Vietoris row at level {i}")
    return seq


def mv_persistent(
    X, A, B, i: int, j: int, k_max: int = 1, *, p: int = 2, ctx: Optional[SequenceContext] = None
) -> SequenceReport:
    ctx = _ctx(X, A, B, p, ctx)
    ctx.require_cover(i, j)
    seq = _persistent_row(ctx, _mv_terms(k_max), _mv_horizontal, i, j)
    return classify(seq, f"persistent Mayer-Vietoris i={i} j={j}")


def pair_stage(X, A, i: int, k_max: int = 1, *, p: int = 2, ctx: Optional[SequenceContext] = None) -> SequenceSlice:
    ctx = _ctx(X, A, None, p, ctx)
    seq = _stage_row(ctx, _pair_terms(k_max), _pair_horizontal, i)
    _assert_stage_exact(seq, f"pair row at level {i}")
    return seq


def pair_persistent(
    X, A, i: int, j: int, k_max: int = 1, *, p: int = 2, ctx: Optional[SequenceContext] = None
) -> SequenceReport:
    ctx = _ctx(X, A, None, p, ctx)
    seq = _persistent_row(ctx, _pair_terms(k_max), _pair_horizontal, i, j)
    return classify(seq, f"persistent pair sequence i={i} j={j}")


def module_sequence(
    kind: str, X, A, B=None, k_max: int = 1, *, p: int = 2, ctx: Optional[SequenceContext] = None
) -> SequenceReport:
    """Sequence of direct-sum modules with block-diagonal maps."""
    if kind == "pair":
        ctx = _ctx(X, A, None, p, ctx)
        seq = _module_row(ctx, _pair_terms(k_max), _pair_horizontal)
    elif kind == "mv":
        ctx = _ctx(X, A, B, p, ctx)
        ctx.require_cover(*range(X.n + 1))
        seq = _module_row(ctx, _mv_terms(k_max), _mv_horizontal)
    else:
        raise ValueError(f"unknown sequence kind {kind!r}")
    return classify(seq, f"module {kind} sequence")


def derive_mv_from_excision(
    X, A, B, i: int, j: int, k_max: int = 1, *, p: int = 2, ctx: Optional[SequenceContext] = None
) -> SequenceReport:
    """Persistent Mayer-Vietoris sequence built from the pair sequences and excision.

    Raises AssertionError when it disagrees with ``mv_persistent``.
    """
    ctx = _ctx(X, A, B, p, ctx)
    ctx.require_cover(i, j)
    terms = _mv_terms(k_max)
    seq = _persistent_row(ctx, terms, _excision_horizontal, i, j)
    derived = classify(seq, f"excision-derived Mayer-Vietoris i={i} j={j}")
    direct = mv_persistent(X, A, B, i, j, k_max, p=p, ctx=ctx)
    diff = compare_reports(derived, direct)
    assert not diff, "derived sequence disagrees with Mayer-Vietoris:\n" + "\n".join(diff)
    return derived


def compare_reports(a: SequenceReport, b: SequenceReport) -> list:
    """Position-level differences in dims, ranks and verdicts (empty when they agree)."""
    out = []
    if len(a.positions) != len(b.positions):
        return [f"length {len(a.positions)} != {len(b.positions)}"]
    for pa, pb in zip(a.positions, b.positions):
        fa = (pa.dim, pa.rank_in, pa.rank_out, pa.composite_zero, pa.im_subset_ker, pa.exact)
        fb = (pb.dim, pb.rank_in, pb.rank_out, pb.composite_zero, pb.im_subset_ker, pb.exact)
        if fa != fb:
            out.append(f"{pa.name}: {pa.to_line()}  vs  {pb.to_line()}")
    if a.verdict != b.verdict:
        out.append(f"verdict {a.verdict} vs {b.verdict}")
    return out
