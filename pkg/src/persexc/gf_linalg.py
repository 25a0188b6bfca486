"""Exact linear algebra over the prime field GF(p).

Matrices are dense residue arrays.  Over GF(2) the elimination packs each
row into a Python int and works with XOR; odd primes use vectorised numpy
row operations.  No floating point is involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "FieldMatrix",
    "Subspace",
    "is_prime",
    "rref",
    "rank",
    "nullspace",
    "image_basis",
    "image_kernel",
    "solve",
    "solve_many",
    "inverse",
    "is_invertible",
    "subspace_equal",
]


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


class FieldMatrix:
    """Immutable matrix with entries in GF(p)."""

    __slots__ = ("data", "p")

    def __init__(self, data, p: int = 2):
        if not is_prime(p):
            raise ValueError(f"field characteristic must be prime, got {p}")
        arr = np.array(data, dtype=np.int64)
        if arr.ndim != 2:
            if arr.size == 0:
                arr = arr.reshape(0, 0)
            else:
                raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
        arr %= p
        arr.setflags(write=False)
        self.data = arr
        self.p = p

    @classmethod
    def _wrap(cls, arr: np.ndarray, p: int) -> "FieldMatrix":
        # trusted constructor: arr already reduced mod p and owned by us
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        obj.data = arr
        obj.p = p
        return obj

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int = 2) -> "FieldMatrix":
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int = 2) -> "FieldMatrix":
        return cls._wrap(np.eye(n, dtype=np.int64), p)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int, p: int = 2) -> "FieldMatrix":
        if not columns:
            return cls.zeros(rows, 0, p)
        return cls(np.array(columns, dtype=np.int64).reshape(len(columns), rows).T, p)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> "FieldMatrix":
        return FieldMatrix._wrap(self.data.T.copy(), self.p)

    def _check(self, other: "FieldMatrix") -> None:
        if not isinstance(other, FieldMatrix):
            raise TypeError(f"expected FieldMatrix, got {type(other).__name__}")
        if other.p != self.p:
            raise ValueError(f"field mismatch: GF({self.p}) vs GF({other.p})")

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        return FieldMatrix._wrap((self.data @ other.data) % self.p, self.p)

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return FieldMatrix._wrap((self.data + other.data) % self.p, self.p)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return FieldMatrix._wrap((self.data - other.data) % self.p, self.p)

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix._wrap((-self.data) % self.p, self.p)

    def scale(self, c: int) -> "FieldMatrix":
        return FieldMatrix._wrap((self.data * (c % self.p)) % self.p, self.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FieldMatrix(p={self.p}, shape={self.shape}, data={self.data.tolist()})"

    def is_zero(self) -> bool:
        return not self.data.any()

    def column(self, j: int) -> np.ndarray:
        return self.data[:, j]

    def select_columns(self, idx: Sequence[int]) -> "FieldMatrix":
        return FieldMatrix._wrap(self.data[:, list(idx)].copy().reshape(self.rows, len(idx)), self.p)

    def select_rows(self, idx: Sequence[int]) -> "FieldMatrix":
        return FieldMatrix._wrap(self.data[list(idx), :].copy().reshape(len(idx), self.cols), self.p)

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()


def hstack(mats: Iterable[FieldMatrix], rows: Optional[int] = None, p: Optional[int] = None) -> FieldMatrix:
    mats = list(mats)
    if not mats:
        if rows is None or p is None:
            raise ValueError("hstack of nothing needs explicit rows and p")
        return FieldMatrix.zeros(rows, 0, p)
    for m in mats[1:]:
        mats[0]._check(m)
        if m.rows != mats[0].rows:
            raise ValueError("hstack row mismatch")
    return FieldMatrix._wrap(np.hstack([m.data for m in mats]), mats[0].p)


def vstack(mats: Iterable[FieldMatrix], cols: Optional[int] = None, p: Optional[int] = None) -> FieldMatrix:
    mats = list(mats)
    if not mats:
        if cols is None or p is None:
            raise ValueError("vstack of nothing needs explicit cols and p")
        return FieldMatrix.zeros(0, cols, p)
    for m in mats[1:]:
        mats[0]._check(m)
        if m.cols != mats[0].cols:
            raise ValueError("vstack column mismatch")
    return FieldMatrix._wrap(np.vstack([m.data for m in mats]), mats[0].p)


def block_diag(mats: Sequence[FieldMatrix], p: int) -> FieldMatrix:
    r = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = np.zeros((r, c), dtype=np.int64)
    i = j = 0
    for m in mats:
        if m.p != p:
            raise ValueError("field mismatch in block_diag")
        out[i:i + m.rows, j:j + m.cols] = m.data
        i += m.rows
        j += m.cols
    return FieldMatrix._wrap(out, p)


# --------------------------------------------------------------------------
# elimination backends


def _rref_gf2(data: np.ndarray) -> tuple[np.ndarray, list[int]]:
    nrows, ncols = data.shape
    if nrows == 0 or ncols == 0:
        return data.copy(), []
    packed = np.packbits(data.astype(np.uint8), axis=1, bitorder="little")
    rows = [int.from_bytes(r.tobytes(), "little") for r in packed]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        bit = 1 << c
        piv = -1
        for t in range(r, nrows):
            if rows[t] & bit:
                piv = t
                break
        if piv < 0:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        for t in range(nrows):
            if t != r and rows[t] & bit:
                rows[t] ^= prow
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    nbytes = packed.shape[1]
    buf = b"".join(x.to_bytes(nbytes, "little") for x in rows)
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8).reshape(nrows, nbytes), axis=1, bitorder="little")
    return bits[:, :ncols].astype(np.int64), pivots


def _rref_dense(data: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = data.copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        factors = a[:, c].copy()
        factors[r] = 0
        if factors.any():
            a = (a - np.outer(factors, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rref(M: FieldMatrix) -> tuple[FieldMatrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns (first-nonzero pivoting)."""
    if M.p == 2:
        out, piv = _rref_gf2(M.data)
    else:
        out, piv = _rref_dense(M.data, M.p)
    return FieldMatrix._wrap(out, M.p), tuple(piv)


def rank(M: FieldMatrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    # eliminate along the shorter side
    if M.rows > M.cols:
        return len(rref(M.T)[1])
    return len(rref(M)[1])


def nullspace(M: FieldMatrix) -> FieldMatrix:
    """Columns form a basis of {x : Mx = 0}."""
    n = M.cols
    R, piv = rref(M)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for t, f in enumerate(free):
        out[f, t] = 1
        for row, pc in enumerate(piv):
            out[pc, t] = (-R.data[row, f]) % M.p
    return FieldMatrix._wrap(out, M.p)


def image_basis(M: FieldMatrix) -> FieldMatrix:
    """Independent columns of M spanning its column space (the pivot columns)."""
    _, piv = rref(M)
    return M.select_columns(piv)


def solve_many(M: FieldMatrix, B: FieldMatrix) -> Optional[FieldMatrix]:
    """Some X with M X = B, or None if any column of B is outside the column span."""
    M._check(B)
    if M.rows != B.rows:
        raise ValueError(f"dimension mismatch: {M.shape} vs right-hand side {B.shape}")
    n = M.cols
    if B.cols == 0:
        return FieldMatrix.zeros(n, 0, M.p)
    R, piv = rref(hstack([M, B]))
    if piv and piv[-1] >= n:
        return None
    X = np.zeros((n, B.cols), dtype=np.int64)
    for row, pc in enumerate(piv):
        X[pc] = R.data[row, n:]
    return FieldMatrix._wrap(X, M.p)


def solve(M: FieldMatrix, b) -> Optional[np.ndarray]:
    """A column x with Mx = b, or None when b is not in the column span."""
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    if b.shape[0] != M.rows:
        raise ValueError(f"dimension mismatch: {M.rows} rows vs rhs of length {b.shape[0]}")
    X = solve_many(M, FieldMatrix(b, M.p))
    return None if X is None else X.data[:, 0].copy()


def is_invertible(M: FieldMatrix) -> bool:
    return M.rows == M.cols and rank(M) == M.rows


def inverse(M: FieldMatrix) -> FieldMatrix:
    if not is_invertible(M):
        raise ValueError(f"matrix of shape {M.shape} is not invertible")
    X = solve_many(M, FieldMatrix.identity(M.rows, M.p))
    assert X is not None
    return X


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of GF(p)^ambient_dim given by independent basis columns."""

    basis: FieldMatrix

    def __post_init__(self):
        if rank(self.basis) != self.basis.cols:
            raise ValueError("subspace basis columns are not independent")

    @classmethod
    def span(cls, M: FieldMatrix) -> "Subspace":
        return cls(image_basis(M))

    @property
    def ambient_dim(self) -> int:
        return self.basis.rows

    @property
    def dim(self) -> int:
        return self.basis.cols

    @property
    def p(self) -> int:
        return self.basis.p

    def contains(self, vectors: FieldMatrix) -> bool:
        if vectors.rows != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        if vectors.cols == 0 or vectors.is_zero():
            return True
        return solve_many(self.basis, vectors) is not None

    def __le__(self, other: "Subspace") -> bool:
        return other.contains(self.basis)


def image_kernel(M: FieldMatrix) -> tuple[Subspace, Subspace]:
    im = Subspace(image_basis(M))
    ker = Subspace(nullspace(M))
    assert im.dim + ker.dim == M.cols, "rank-nullity violated"
    return im, ker


def subspace_equal(U: Subspace, V: Subspace) -> bool:
    if U.ambient_dim != V.ambient_dim:
        raise ValueError(f"ambient mismatch: {U.ambient_dim} vs {V.ambient_dim}")
    return U.dim == V.dim and U <= V and V <= U
