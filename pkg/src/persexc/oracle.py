"""Independent ground truth, random instances and non-exactness search.

``oracle_betti`` builds its own boundary matrices and only uses raw field
arithmetic (rank, nullspace) from ``gf_linalg``: no homology bases, no
barcodes.  The persistent Betti number is

    dim (Z_k(X_i, A_i) + B_k(X_j, A_j)) / B_k(X_j, A_j)
      = rank [Z_i | B_j] - rank B_j

with both blocks written in the chain basis of (X_j, A_j).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from itertools import combinations
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np

from .complex_core import (
    FilteredComplex,
    SubcomplexSpec,
    closure,
    format_complex,
    format_subcomplex,
    load_complex,
    load_subcomplex,
)
from .gf_linalg import FieldMatrix, nullspace, rank

__all__ = [
    "InstanceParams",
    "Witness",
    "oracle_betti",
    "generate",
    "search_nonexact",
    "SweepSummary",
    "sweep_nonexact",
    "shrink_witness",
    "save_witness",
    "load_witness",
]


def _boundary(space: set, excluded: set, k: int, p: int):
    rows = sorted(s for s in space if len(s) == k and s not in excluded)
    cols = sorted(s for s in space if len(s) == k + 1 and s not in excluded)
    at = {s: r for r, s in enumerate(rows)}
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for c, s in enumerate(cols):
        for t in range(len(s)):
            f = s[:t] + s[t + 1:]
            if f in at:
                mat[at[f], c] = (-1) ** t
    return FieldMatrix(mat, p), rows, cols


def oracle_betti(
    X: FilteredComplex, relative_to: Optional[SubcomplexSpec], k: int, i: int, j: int, *, p: int = 2
) -> int:
    if i > j:
        raise ValueError(f"need i <= j, got {i} > {j}")
    sub = set(relative_to.members) if relative_to is not None else set()
    Xi = {s for s, lv in X.levels.items() if lv <= i}
    Xj = {s for s, lv in X.levels.items() if lv <= j}
    Ai = {s for s in sub if X.levels[s] <= i}
    Aj = {s for s in sub if X.levels[s] <= j}
    # cycles of (X_i, A_i): kernel of the k-th relative boundary
    if k == 0:
        ck_i = sorted(s for s in Xi if len(s) == 1 and s not in Ai)
        Z = FieldMatrix.identity(len(ck_i), p)
    else:
        d_i, _, ck_i = _boundary(Xi, Ai, k, p)
        Z = nullspace(d_i)
    d_j, ck_j, _ = _boundary(Xj, Aj, k + 1, p)
    if not ck_i or Z.cols == 0:
        return 0
    # embed Z into the chain basis of (X_j, A_j)
    pos = {s: r for r, s in enumerate(ck_j)}
    emb = np.zeros((len(ck_j), Z.cols), dtype=np.int64)
    for r, s in enumerate(ck_i):
        if s in pos:
            emb[pos[s]] = Z.data[r]
    stacked = FieldMatrix(np.hstack([emb, d_j.data]), p)
    return rank(stacked) - rank(d_j)


# ---------------------------------------------------------------------------
# instance generation


@dataclass(frozen=True)
class InstanceParams:
    seed: int = 0
    max_vertices: int = 7
    max_dim: int = 2
    n_levels: int = 4
    cover_bias: float = 0.6
    min_excised: int = 0  # force at least this many simplices in A \ B

    def __post_init__(self):
        if not 1 <= self.max_vertices <= 10:
            raise ValueError("max_vertices must be in 1..10")
        if not 0 <= self.max_dim <= 3:
            raise ValueError("max_dim must be in 0..3")
        if not 1 <= self.n_levels <= 5:
            raise ValueError("n_levels must be in 1..5")
        if not 0.0 <= self.cover_bias <= 1.0:
            raise ValueError("cover_bias must be a probability")


def _maximal(simplices) -> list:
    ss = sorted(set(simplices), key=lambda s: (-len(s), s))
    out = []
    for s in ss:
        if not any(set(s) < set(t) for t in out):
            out.append(s)
    return sorted(out, key=lambda s: (len(s), s))


def generate(params: InstanceParams) -> tuple:
    """Random filtered complex X with closed subcomplexes A, B such that X = A ∪ B."""
    rng = random.Random(params.seed)
    for _ in range(1000):
        out = _attempt(rng, params)
        if out is not None:
            return out
    raise RuntimeError(f"could not satisfy min_excised={params.min_excised} for seed {params.seed}")


def _attempt(rng: random.Random, params: InstanceParams):
    nv = rng.randint(1, params.max_vertices)
    verts = list(range(nv))
    facets = [(v,) for v in verts]
    for _ in range(rng.randint(0, nv + 1)):
        d = rng.randint(1, min(params.max_dim, nv - 1)) if nv > 1 and params.max_dim > 0 else 0
        facets.append(tuple(sorted(rng.sample(verts, d + 1))))
    cx = sorted(closure(facets), key=lambda s: (len(s), s))
    top = params.n_levels - 1
    levels: dict = {}
    for s in cx:
        own = rng.randint(0, top)
        below = max((levels[f] for f in combinations(s, len(s) - 1)), default=0) if len(s) > 1 else 0
        levels[s] = max(own, below)
    X = FilteredComplex(levels, n=top, validate=False)
    maximal = _maximal(cx)
    in_a, in_b = [], []
    for s in maximal:
        a = rng.random() < params.cover_bias
        b = rng.random() < params.cover_bias
        if not a and not b:
            a, b = (True, False) if rng.random() < 0.5 else (False, True)
        in_a.append(a)
        in_b.append(b)
    if not any(in_a):
        in_a[rng.randrange(len(maximal))] = True
    if not any(in_b):
        in_b[rng.randrange(len(maximal))] = True
    if params.min_excised:
        order = list(range(len(maximal)))
        rng.shuffle(order)
        for t in order:
            A = closure(s for s, f in zip(maximal, in_a) if f)
            B = closure(s for s, f in zip(maximal, in_b) if f)
            if len(A - B) >= params.min_excised:
                break
            if sum(in_b) > 1 or not in_b[t]:
                in_a[t], in_b[t] = True, False
        A = closure(s for s, f in zip(maximal, in_a) if f)
        B = closure(s for s, f in zip(maximal, in_b) if f)
        if len(A - B) < params.min_excised or not B:
            return None
    A = X.sub(closure(s for s, f in zip(maximal, in_a) if f))
    B = X.sub(closure(s for s, f in zip(maximal, in_b) if f))
    return X, A, B


# ---------------------------------------------------------------------------
# non-exactness witnesses


@dataclass(frozen=True, eq=False)
class Witness:
    target: str
    seed: Optional[int]
    X: FilteredComplex
    A: SubcomplexSpec
    B: Optional[SubcomplexSpec]
    i: int
    j: int
    k: int
    position: str
    k_max: int = 1
    p: int = 2

    def header(self) -> list:
        return [
            f"witness target={self.target} seed={self.seed} n={self.X.n} i={self.i} j={self.j} k={self.k} "
            f"k_max={self.k_max} p={self.p} position={self.position}"
        ]


def _report(target: str, X, A, B, i: int, j: int, k_max: int, p: int, ctx=None):
    from .sequences import SequenceContext, mv_persistent, pair_persistent

    if ctx is None:
        ctx = SequenceContext(X, A, B if target == "mv" else None, p=p)
    if target == "mv":
        return mv_persistent(X, A, B, i, j, k_max, p=p, ctx=ctx)
    return pair_persistent(X, A, i, j, k_max, p=p, ctx=ctx)


def _first_nonexact(target, X, A, B, k_max, p):
    from .sequences import NOT_CHAIN, SequenceContext

    ctx = SequenceContext(X, A, B if target == "mv" else None, p=p)
    for i in range(X.n + 1):
        for j in range(i + 1, X.n + 1):
            rep = _report(target, X, A, B, i, j, k_max, p, ctx)
            if rep.verdict == NOT_CHAIN:
                raise AssertionError(f"persistent {target} sequence is not a chain complex:\n{rep.to_text()}")
            bad = rep.nonexact_positions()
            if bad:
                return i, j, bad[0].name
    return None


def _degree_of(position: str) -> int:
    digits = "".join(ch for ch in position.split("(")[0] if ch.isdigit())
    return int(digits)


def search_nonexact(
    seeds: Iterable[int],
    target: str = "mv",
    *,
    base: InstanceParams = InstanceParams(),
    k_max: int = 1,
    p: int = 2,
    degenerate: bool = False,
) -> Optional[Witness]:
    """First generated instance whose persistent sequence is a chain complex but not exact.

    With ``degenerate`` every instance is replaced by A = B = X, which
    never yields a witness.
    """
    if target not in ("mv", "pair"):
        raise ValueError(f"unknown target {target!r}")
    for seed in seeds:
        X, A, B = generate(replace(base, seed=seed))
        if degenerate:
            A = B = X.whole()
        hit = _first_nonexact(target, X, A, B, k_max, p)
        if hit is not None:
            i, j, pos = hit
            return Witness(target, seed, X, A, B if target == "mv" else None, i, j, _degree_of(pos), pos, k_max, p)
    return None


@dataclass(frozen=True)
class SweepSummary:
    target: str
    seeds: int
    witnesses: int  # instances with at least one non-exact position
    first: Optional[int]  # seed of the first such instance


def sweep_nonexact(
    seeds: Iterable[int], target: str = "mv", *, base: InstanceParams = InstanceParams(), k_max: int = 1, p: int = 2
) -> SweepSummary:
    """Run every seed (no early exit) and count non-exact instances.

    Raises AssertionError if any persistent sequence fails to be a chain complex.
    """
    seeds = list(seeds)
    hits, first = 0, None
    for seed in seeds:
        X, A, B = generate(replace(base, seed=seed))
        if _first_nonexact(target, X, A, B, k_max, p) is not None:
            hits += 1
            first = seed if first is None else first
    return SweepSummary(target, len(seeds), hits, first)


def shrink_witness(w: Witness) -> Witness:
    """Greedily drop maximal simplices of X while the same position stays non-exact."""
    from .sequences import CoverViolation

    cur = w
    changed = True
    while changed:
        changed = False
        for s in _maximal(cur.X.levels):
            keep = {t: lv for t, lv in cur.X.levels.items() if t != s}
            if not keep:
                continue
            X = FilteredComplex(keep, n=cur.X.n, validate=False)
            A = X.sub(cur.A.members - {s})
            B = X.sub(cur.B.members - {s}) if cur.B is not None else None
            try:
                rep = _report(cur.target, X, A, B, cur.i, cur.j, cur.k_max, cur.p)
            except CoverViolation:
                continue
            if any(q.name == cur.position for q in rep.nonexact_positions()):
                cur = replace(cur, X=X, A=A, B=B)
                changed = True
                break
    return cur


def save_witness(w: Witness, directory: Union[str, Path]) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "X.txt").write_text(format_complex(w.X, w.header()), encoding="utf-8")
    (d / "A.txt").write_text(format_subcomplex(w.A, "X.txt", w.header()), encoding="utf-8")
    if w.B is not None:
        (d / "B.txt").write_text(format_subcomplex(w.B, "X.txt", w.header()), encoding="utf-8")


def load_witness(directory: Union[str, Path]) -> Witness:
    d = Path(directory)
    text = (d / "X.txt").read_text(encoding="utf-8")
    meta_line = next(ln for ln in text.splitlines() if ln.startswith("# witness "))
    meta = dict(tok.split("=", 1) for tok in meta_line[len("# witness "):].split())
    X = load_complex(d / "X.txt")
    X = FilteredComplex(X.levels, n=int(meta["n"]))
    A = load_subcomplex(d / "A.txt", X)
    B = load_subcomplex(d / "B.txt", X) if (d / "B.txt").exists() else None
    seed = None if meta["seed"] == "None" else int(meta["seed"])
    return Witness(
        meta["target"], seed, X, A, B, int(meta["i"]), int(meta["j"]), int(meta["k"]),
        meta["position"], int(meta["k_max"]), int(meta["p"]),
    )
