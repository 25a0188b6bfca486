"""Chain complexes of filtration stages, homology bases, induced maps and towers.

Everything here works with explicit bases: a homology space carries
cycle representatives, and an induced map is a matrix in those bases.
Relative chain complexes C(X_i)/C(A_i) are realised by deleting the
simplices of A_i from the chain bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .complex_core import FilteredComplex, SubcomplexSpec, faces
from .gf_linalg import FieldMatrix, hstack, image_basis, nullspace, rank, rref, solve_many

Space = Union[FilteredComplex, SubcomplexSpec]

__all__ = [
    "InducedMapError",
    "StageChainComplex",
    "HomologySpace",
    "PersistenceModule",
    "ModuleMorphism",
    "chain_complex",
    "stage_complex",
    "homology",
    "stage_homology",
    "induced_map",
    "build_module",
    "persistent_betti",
    "restricted_map",
]


class InducedMapError(RuntimeError):
    """A chain could not be expressed in the target homology basis."""


def _members(space: Space) -> frozenset:
    return frozenset(space.levels) if isinstance(space, FilteredComplex) else space.members


def _levels(space: Space):
    return space.levels if isinstance(space, FilteredComplex) else space.parent.levels


def _top(space: Space) -> int:
    return space.n if isinstance(space, FilteredComplex) else space.parent.n


@dataclass(frozen=True, eq=False)
class StageChainComplex:
    """Chain complex of one stage, optionally modulo a subcomplex.

    ``bases[k]`` lists the k-simplices that survive in the quotient, in
    lexicographic order; ``boundaries[k]`` is the matrix of C_k -> C_{k-1}.
    """

    level: int
    p: int
    bases: tuple
    boundaries: tuple
    excluded: frozenset = frozenset()
    index: tuple = field(default=(), repr=False)

    @property
    def top_degree(self) -> int:
        return len(self.bases) - 1

    def basis(self, k: int) -> tuple:
        return self.bases[k] if 0 <= k < len(self.bases) else ()

    def rank_of(self, k: int) -> int:
        return len(self.basis(k))

    def boundary(self, k: int) -> FieldMatrix:
        if 1 <= k < len(self.boundaries):
            return self.boundaries[k]
        return FieldMatrix.zeros(self.rank_of(k - 1) if k >= 1 else 0, self.rank_of(k), self.p)

    def position(self, k: int) -> dict:
        return self.index[k] if 0 <= k < len(self.index) else {}

    @property
    def is_relative(self) -> bool:
        return bool(self.excluded)

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.bases)


def chain_complex(simplices, excluded=frozenset(), *, level: int = 0, p: int = 2) -> StageChainComplex:
    """Chain complex of the simplex set ``simplices`` modulo ``excluded``."""
    excluded = frozenset(excluded)
    kept = [s for s in simplices if s not in excluded]
    top = max((len(s) - 1 for s in simplices), default=-1)
    by_deg: list[list] = [[] for _ in range(top + 2)]
    for s in kept:
        by_deg[len(s) - 1].append(s)
    bases = tuple(tuple(sorted(b)) for b in by_deg)
    index = tuple({s: r for r, s in enumerate(b)} for b in bases)
    bnds = [FieldMatrix.zeros(0, len(bases[0]) if bases else 0, p)]
    for k in range(1, len(bases)):
        mat = np.zeros((len(bases[k - 1]), len(bases[k])), dtype=np.int64)
        rows = index[k - 1]
        for c, s in enumerate(bases[k]):
            for t, f in enumerate(faces(s)):
                r = rows.get(f)
                if r is not None:
                    mat[r, c] = 1 if t % 2 == 0 else p - 1
                elif f not in excluded:
                    raise ValueError(f"face {f} of {s} is neither present nor excluded")
        bnds.append(FieldMatrix(mat, p))
    out = StageChainComplex(level, p, bases, tuple(bnds), excluded, index)
    for k in range(2, len(bases)):
        assert (out.boundary(k - 1) @ out.boundary(k)).is_zero(), "boundary of a boundary is nonzero"
    return out


def stage_complex(
    X: Space, i: int, relative_to: Optional[SubcomplexSpec] = None, *, p: int = 2
) -> StageChainComplex:
    """Chain complex of X_i, or of the pair (X_i, A_i) when ``relative_to`` is given."""
    n = _top(X)
    if not 0 <= i <= n:
        raise ValueError(f"level {i} outside 0..{n}")
    lv = _levels(X)
    stage = [s for s in _members(X) if lv[s] <= i]
    excluded: frozenset = frozenset()
    if relative_to is not None:
        members = _members(X)
        if not relative_to.members <= members:
            raise ValueError("relative_to is not a subcomplex of the given space")
        excluded = relative_to.stage(i)
    return chain_complex(stage, excluded, level=i, p=p)


@dataclass(frozen=True, eq=False)
class HomologySpace:
    """H_k of a stage complex with chosen cycle representatives."""

    complex: StageChainComplex
    degree: int
    reps: FieldMatrix
    boundary_basis: FieldMatrix

    @property
    def dim(self) -> int:
        return self.reps.cols

    @property
    def level(self) -> int:
        return self.complex.level

    @property
    def p(self) -> int:
        return self.complex.p

    @property
    def basis(self) -> tuple:
        return self.complex.basis(self.degree)

    def coordinates(self, chains: FieldMatrix) -> FieldMatrix:
        """Homology coordinates of cycles given as columns in the chain basis."""
        if self.dim == 0:
            if not chains.is_zero() and solve_many(self.boundary_basis, chains) is None:
                raise InducedMapError("chain is not a boundary in a zero homology space")
            return FieldMatrix.zeros(0, chains.cols, self.p)
        sol = solve_many(hstack([self.reps, self.boundary_basis]), chains)
        if sol is None:
            raise InducedMapError("chain is not a cycle of the target complex")
        return sol.select_rows(range(self.dim))

    def chains(self, coords: FieldMatrix) -> FieldMatrix:
        """Decode homology coordinates into representative chains."""
        return self.reps @ coords


def homology(stage: StageChainComplex, k: int) -> HomologySpace:
    if k < 0:
        raise ValueError("degree must be non-negative")
    p = stage.p
    ck = stage.rank_of(k)
    Z = nullspace(stage.boundary(k)) if ck else FieldMatrix.zeros(0, 0, p)
    Bb = image_basis(stage.boundary(k + 1)) if ck else FieldMatrix.zeros(0, 0, p)
    nb = Bb.cols
    if Z.cols == nb:
        reps = FieldMatrix.zeros(ck, 0, p)
    else:
        _, piv = rref(hstack([Bb, Z]))
        reps = Z.select_columns([c - nb for c in piv if c >= nb])
    assert reps.cols == Z.cols - nb
    return HomologySpace(stage, k, reps, Bb)


def stage_homology(
    X: Space, i: int, k: int, relative_to: Optional[SubcomplexSpec] = None, *, p: int = 2
) -> HomologySpace:
    return homology(stage_complex(X, i, relative_to, p=p), k)


def push_chains(chains: FieldMatrix, source: StageChainComplex, target: StageChainComplex, k: int) -> FieldMatrix:
    """Image of k-chains under the simplicial map that is the identity on simplices.

    Simplices absent from the target basis must be quotiented away there;
    anything else means the two complexes are not related by an inclusion
    or a quotient map.
    """
    src = source.basis(k)
    rows = target.position(k)
    out = np.zeros((target.rank_of(k), chains.cols), dtype=np.int64)
    for r, s in enumerate(src):
        t = rows.get(s)
        if t is not None:
            out[t] = chains.data[r]
        elif s not in target.excluded and chains.data[r].any():
            raise InducedMapError(f"simplex {s} has no image in the target complex")
    return FieldMatrix(out, chains.p)


def induced_map(source: HomologySpace, target: HomologySpace) -> FieldMatrix:
    """Matrix of the map induced by an inclusion (of spaces or pairs) or a quotient."""
    if source.degree != target.degree:
        raise ValueError("degree mismatch")
    if source.level > target.level:
        raise ValueError(f"cannot map level {source.level} into earlier level {target.level}")
    pushed = push_chains(source.reps, source.complex, target.complex, source.degree)
    return target.coordinates(pushed)


@dataclass(frozen=True, eq=False)
class PersistenceModule:
    """Finite tower M_0 -> M_1 -> ... -> M_n of GF(p)-vector spaces."""

    degree: int
    dims: tuple
    transitions: tuple
    p: int = 2
    spaces: tuple = field(default=(), repr=False)

    def __post_init__(self):
        for t, (a, b) in enumerate(zip(self.dims, self.dims[1:])):
            if self.transitions[t].shape != (b, a):
                raise ValueError(f"transition {t} has shape {self.transitions[t].shape}, expected {(b, a)}")

    @property
    def n(self) -> int:
        return len(self.dims) - 1

    def phi(self, i: int, j: int) -> FieldMatrix:
        if i > j:
            raise ValueError(f"no structure map from level {i} to earlier level {j}")
        out = FieldMatrix.identity(self.dims[i], self.p)
        for t in range(i, j):
            out = self.transitions[t] @ out
        return out


@dataclass(frozen=True, eq=False)
class ModuleMorphism:
    source: PersistenceModule
    target: PersistenceModule
    components: tuple

    def commutes(self, i: int, j: int) -> bool:
        f = self.components
        return f[j] @ self.source.phi(i, j) == self.target.phi(i, j) @ f[i]

    def check(self) -> None:
        n = self.source.n
        for i in range(n):
            if not self.commutes(i, i + 1):
                raise AssertionError(f"square {i}->{i + 1} does not commute")


def build_module(
    X: Space, k: int, relative_to: Optional[SubcomplexSpec] = None, *, p: int = 2
) -> PersistenceModule:
    spaces = tuple(stage_homology(X, i, k, relative_to, p=p) for i in range(_top(X) + 1))
    trans = tuple(induced_map(a, b) for a, b in zip(spaces, spaces[1:]))
    return PersistenceModule(k, tuple(h.dim for h in spaces), trans, p, spaces)


def persistent_betti(M: PersistenceModule, i: int, j: int) -> int:
    """dim of the image of M_i -> M_j."""
    if i > j:
        raise ValueError(f"persistent Betti number needs i <= j, got {i} > {j}")
    return rank(M.phi(i, j))


def restricted_map(f: FieldMatrix, i: FieldMatrix, j: FieldMatrix, g: FieldMatrix) -> FieldMatrix:
    """Restrict ``j`` to Im(f) -> Im(g) for a commuting square j f = g i.

    The result is expressed in the pivot-column bases of the two images,
    so its shape is (dim Im g, dim Im f).
    """
    if j @ f != g @ i:
        raise ValueError("square does not commute")
    src = image_basis(f)
    dst = image_basis(g)
    out = solve_many(dst, j @ src)
    if out is None:
        raise InducedMapError("j does not carry Im(f) into Im(g)")
    return out
