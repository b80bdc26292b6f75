"""Dense exact linear algebra over F_p.

Entries live in numpy ``int64`` arrays; with p < 2^31 every product of two
reduced entries fits, so elimination is exact.  Pivoting is deterministic
(first nonzero entry, scanning columns left to right and rows top down), which
makes echelon forms and kernel bases reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .polyfp import check_prime


@dataclass(frozen=True, eq=False)
class FpMatrix:
    p: int
    entries: np.ndarray

    def __post_init__(self):
        check_prime(self.p)
        a = np.asarray(self.entries, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("FpMatrix needs a 2-d array")
        a = np.mod(a, self.p)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_rows(cls, p: int, rows: Sequence[Sequence[int]], cols: int | None = None) -> "FpMatrix":
        if len(rows) == 0:
            return cls(p, np.zeros((0, cols or 0), dtype=np.int64))
        return cls(p, np.array(rows, dtype=np.int64).reshape(len(rows), -1))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, size: int) -> "FpMatrix":
        return cls(p, np.eye(size, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix(self.p, self.entries.T)

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.entries, other.entries)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, {self.tolist()})"


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` mod p and the pivot columns.

    Rows of the result past ``len(pivots)`` are zero.
    """
    a = np.mod(np.array(a, dtype=np.int64, copy=True), p)
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
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = a[r, c:] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            # columns left of c are already zero in row r
            a[hit, c:] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _rank_array(a: np.ndarray, p: int) -> int:
    # forward elimination only; cheaper than a full rref
    a = np.mod(np.array(a, dtype=np.int64, copy=True), p)
    nrows, ncols = a.shape
    if nrows > ncols:
        a = a.T.copy()
        nrows, ncols = ncols, nrows
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
        inv = pow(int(a[r, c]), -1, p)
        a[r, c:] = a[r, c:] * inv % p
        below = r + 1 + np.flatnonzero(a[r + 1:, c])
        if below.size:
            a[below, c:] = (a[below, c:] - np.outer(a[below, c], a[r, c:])) % p
        r += 1
    return r


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank of an integer array reduced mod p."""
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return _rank_array(a, p)


def mat_rank(m: FpMatrix) -> int:
    return rank_mod_p(m.entries, m.p)


def null_space(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Right null space of ``a`` mod p as the rows of the returned array,
    together with the free columns.

    One vector per free column ``j``: a 1 in position ``j``, zeros at the other
    free columns, determined values at the pivot columns.  The rows come out
    in increasing order of their free column, so the coordinates of a null
    vector in this basis are simply its entries at the free columns.
    """
    a = np.asarray(a, dtype=np.int64)
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64), list(range(ncols))
    r, pivots = rref(a, p)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    if free:
        basis[np.arange(len(free)), free] = 1
        if pivots:
            # x_pivot = -sum_j r[row, j] x_j over free j
            basis[:, pivots] = (-r[: len(pivots)][:, free].T) % p
    assert len(pivots) + len(free) == ncols
    return basis, free


def kernel_basis_array(a: np.ndarray, p: int) -> np.ndarray:
    return null_space(a, p)[0]


def mat_kernel_basis(m: FpMatrix) -> list[list[int]]:
    basis = kernel_basis_array(m.entries, m.p)
    return basis.tolist()


def mat_mul(a: FpMatrix, b: "FpMatrix | Sequence[int] | np.ndarray"):
    """Matrix product, or matrix-vector product when ``b`` is a vector."""
    if isinstance(b, FpMatrix):
        if a.p != b.p:
            raise ValueError(f"modulus mismatch: {a.p} vs {b.p}")
        if a.cols != b.rows:
            raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
        return FpMatrix(a.p, _matmul_mod(a.entries, b.entries, a.p))
    v = np.asarray(b, dtype=np.int64)
    if v.ndim != 1 or v.shape[0] != a.cols:
        raise ValueError(f"dimension mismatch: {a.shape} @ vector of length {v.shape}")
    return [int(x) for x in _matmul_mod(a.entries, v.reshape(-1, 1), a.p).ravel()]


mat_apply = mat_mul


def _matmul_mod(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    # keep partial sums below 2^63: each product is < p^2 < 2^62
    if x.shape[1] == 0:
        return np.zeros((x.shape[0], y.shape[1]), dtype=np.int64)
    limit = max(1, (1 << 62) // max(1, (p - 1) ** 2))
    if x.shape[1] <= limit:
        return (x @ y) % p
    out = np.zeros((x.shape[0], y.shape[1]), dtype=np.int64)
    for s in range(0, x.shape[1], limit):
        out = (out + x[:, s:s + limit] @ y[s:s + limit]) % p
    return out


def mat_pow(m: FpMatrix, e: int) -> FpMatrix:
    if m.rows != m.cols:
        raise ValueError("matrix power needs a square matrix")
    result = FpMatrix.identity(m.p, m.rows)
    base = m
    while e:
        if e & 1:
            result = mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return result


def mat_stable_rank(m: FpMatrix) -> int:
    """Rank of ``M^g`` for a g x g matrix; the rank sequence of powers has
    stabilised by then.  For a Hasse-Witt matrix this is the p-rank."""
    if m.rows != m.cols:
        raise ValueError(f"stable rank needs a square matrix, got {m.shape}")
    if m.rows == 0:
        return 0
    return mat_rank(mat_pow(m, m.rows))


def mat_is_invertible(m: FpMatrix) -> bool:
    return m.rows == m.cols and mat_rank(m) == m.rows


def solve_in_span(basis: np.ndarray, vectors: np.ndarray, p: int) -> np.ndarray:
    """Coordinates of each row of ``vectors`` in the row span of ``basis``.

    ``basis`` rows must be linearly independent.  Raises ``ValueError`` if a
    vector is not in the span.
    """
    basis = np.asarray(basis, dtype=np.int64) % p
    vectors = np.asarray(vectors, dtype=np.int64) % p
    k = basis.shape[0]
    if vectors.shape[0] == 0:
        return np.zeros((0, k), dtype=np.int64)
    if k == 0:
        if np.any(vectors):
            raise ValueError("vector not in the span of an empty basis")
        return np.zeros((vectors.shape[0], 0), dtype=np.int64)
    # eliminate on [basis^T | vectors^T]
    aug = np.concatenate([basis.T, vectors.T], axis=1)
    r, pivots = rref(aug, p)
    if len(pivots) > k or pivots[:k] != list(range(k)):
        raise ValueError("vector not in the span of the basis")
    if np.any(r[k:, k:]):
        raise ValueError("vector not in the span of the basis")
    return r[:k, k:].T.copy()
