"""Cohomology of line bundles on a hypersurface X = V(f) in P^n over F_p.

Two concrete models carry everything:

* ``H^0(X, O_X(s))`` is the degree-``s`` part of ``S / (f)``, with a monomial
  complement of ``f * S_{s-d}`` as basis.
* ``H^{n-1}(X, O_X(m))`` is the kernel of multiplication by ``f`` from
  ``H^n(P^n, O(m-d))`` to ``H^n(P^n, O(m))``.  The top cohomology of ``P^n``
  has the inverse monomials ``x^a`` (all ``a_i <= -1``) as basis; we store
  them through the *dual exponent* ``b = -a - 1 >= 0``, so that ``H^n(P^n,
  O(j))`` is indexed by ordinary monomials of degree ``-j-n-1`` and
  multiplication by ``x^c`` becomes ``b -> b - c`` (dropped when negative).

The Frobenius of ``O_X`` acts on the second model by
``[x^a] -> [f^(p-1) x^(pa)]``, in dual exponents ``b -> p*b + (p-1) - c``
summed over the terms ``x^c`` of ``f^(p-1)``.

Every middle group ``H^i(X, O_X(m))``, ``0 < i < n-1``, vanishes, so the long
exact sequence of ``0 -> O_X(s) -> F_*O_X(ps) -> B1(s) -> 0`` is determined
by the two models and the rank of Frobenius on the top group.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import comb, factorial
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .matfp import FpMatrix, null_space, rank_mod_p, rref
from .polyfp import MultiPoly, check_prime, monomials_of_degree, poly_pow


@dataclass(frozen=True)
class HypersurfaceDatum:
    """A hypersurface ``V(f)`` in ``P^n`` over ``F_p``.

    ``smooth`` is ``None`` when unknown; families fill it in when a closed
    form is available.  ``label`` is free-form provenance.
    """

    p: int
    n: int
    f: MultiPoly
    label: str = field(default="", compare=False)
    smooth: bool | None = field(default=None, compare=False)

    def __post_init__(self):
        check_prime(self.p)
        if self.f.p != self.p:
            raise ValueError(f"polynomial is over F_{self.f.p}, datum over F_{self.p}")
        if self.f.nvars != self.n + 1:
            raise ValueError(f"P^{self.n} needs {self.n + 1} variables, got {self.f.nvars}")
        if self.n < 1:
            raise ValueError("ambient dimension must be at least 1")
        if self.f.is_zero or not self.f.is_homogeneous or self.f.degree < 1:
            raise ValueError("f must be a nonzero homogeneous form of degree >= 1")

    @property
    def d(self) -> int:
        return self.f.degree

    @property
    def dim(self) -> int:
        return self.n - 1

    @property
    def nvars(self) -> int:
        return self.n + 1

    @property
    def canonical_level(self) -> int:
        """``omega_X = O_X(d - n - 1)``."""
        return self.d - self.n - 1

    @property
    def kind(self) -> str:
        k = self.canonical_level
        return "fano" if k < 0 else ("calabi-yau" if k == 0 else "general-type")

    @property
    def genus(self) -> int:
        if self.n != 2:
            raise ValueError("genus is only defined here for plane curves")
        return (self.d - 1) * (self.d - 2) // 2

    def __repr__(self) -> str:
        tag = f" {self.label!r}" if self.label else ""
        return f"HypersurfaceDatum(p={self.p}, n={self.n}, d={self.d}{tag}, f={self.f.to_text()!r})"


# -- closed forms -----------------------------------------------------------

def binom_poly(x: int, k: int) -> int:
    """Generalized binomial ``x(x-1)...(x-k+1)/k!`` (a polynomial in x)."""
    num = 1
    for i in range(k):
        num *= x - i
    return num // factorial(k)


def h_line_bundle_pn(n: int, j: int) -> tuple[int, int]:
    """``(h^0, h^n)`` of ``O(j)`` on ``P^n``; middle cohomology is zero."""
    h0 = comb(n + j, n) if j >= 0 else 0
    htop = comb(-j - 1, n) if j <= -(n + 1) else 0
    return h0, htop


def h0_dim(X: HypersurfaceDatum, s: int) -> int:
    if s < 0:
        return 0
    return comb(X.n + s, X.n) - (comb(X.n + s - X.d, X.n) if s >= X.d else 0)


def htop_dim(X: HypersurfaceDatum, m: int) -> int:
    """``h^{n-1}(O_X(m))`` by Serre duality."""
    return h0_dim(X, X.canonical_level - m)


def chi_line(X: HypersurfaceDatum, j: int) -> int:
    return binom_poly(X.n + j, X.n) - binom_poly(X.n + j - X.d, X.n)


def line_dims(X: HypersurfaceDatum, j: int) -> tuple[int, ...]:
    """``(h^0, ..., h^{dim X})`` of ``O_X(j)``."""
    N = X.dim
    if N == 0:
        # zero-dimensional: only h^0, which is d (the points counted with multiplicity)
        return (X.d,)
    out = [0] * (N + 1)
    out[0] = h0_dim(X, j)
    out[N] += htop_dim(X, j)
    return tuple(out)


# -- monomial indexing --------------------------------------------------------

@lru_cache(maxsize=256)
def _monomials(nvars: int, degree: int) -> tuple[tuple[tuple[int, ...], ...], dict]:
    mons = tuple(monomials_of_degree(nvars, degree))
    return mons, {m: i for i, m in enumerate(mons)}


def _terms_array(f: MultiPoly) -> tuple[np.ndarray, np.ndarray]:
    items = list(f.iter_terms())
    if not items:
        return np.zeros((0, f.nvars), dtype=np.int64), np.zeros(0, dtype=np.int64)
    exps = np.array([e for e, _ in items], dtype=np.int64)
    coefs = np.array([c for _, c in items], dtype=np.int64)
    return exps, coefs


@lru_cache(maxsize=64)
def frobenius_kernel_poly(f: MultiPoly) -> MultiPoly:
    """``f^(p-1)``, the polynomial that drives every Frobenius map here."""
    return poly_pow(f, f.p - 1)


# -- H^0 model ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuotientBasis:
    """Monomial basis of ``S_s / f S_{s-d}``.

    ``echelon`` holds the reduced rows spanning ``f * S_{s-d}`` (pivot columns
    ``pivots``); ``basis`` are the monomials at the remaining columns.
    """

    X: HypersurfaceDatum
    s: int
    ambient: tuple[tuple[int, ...], ...]
    echelon: np.ndarray
    pivots: tuple[int, ...]
    complement: tuple[int, ...]

    @property
    def basis(self) -> list[tuple[int, ...]]:
        return [self.ambient[j] for j in self.complement]

    def __len__(self) -> int:
        return len(self.complement)

    def reduce(self, vectors: np.ndarray) -> np.ndarray:
        """Quotient coordinates of rows of ``vectors`` (ambient coordinates)."""
        p = self.X.p
        v = np.asarray(vectors, dtype=np.int64) % p
        if self.pivots:
            v = (v - v[:, list(self.pivots)] @ self.echelon) % p
        return v[:, list(self.complement)]

    def reduce_poly(self, g: MultiPoly) -> np.ndarray:
        _, index = _monomials(self.X.nvars, self.s)
        v = np.zeros((1, len(self.ambient)), dtype=np.int64)
        for e, c in g.iter_terms():
            if sum(e) != self.s:
                raise ValueError(f"term {e} is not of degree {self.s}")
            v[0, index[e]] = c
        return self.reduce(v)[0]


@lru_cache(maxsize=512)
def h0_quotient_basis(X: HypersurfaceDatum, s: int) -> QuotientBasis:
    nv, p = X.nvars, X.p
    if s < 0:
        return QuotientBasis(X, s, (), np.zeros((0, 0), dtype=np.int64), (), ())
    ambient, index = _monomials(nv, s)
    lower, _ = _monomials(nv, s - X.d)
    if not lower:
        return QuotientBasis(X, s, ambient, np.zeros((0, len(ambient)), dtype=np.int64),
                             (), tuple(range(len(ambient))))
    rows = np.zeros((len(lower), len(ambient)), dtype=np.int64)
    exps, coefs = _terms_array(X.f)
    for r, mon in enumerate(lower):
        for c, coef in zip(exps, coefs):
            rows[r, index[tuple(int(x) for x in c + mon)]] = coef
    ech, pivots = rref(rows, p)
    ech = ech[: len(pivots)]
    pivset = set(pivots)
    complement = tuple(j for j in range(len(ambient)) if j not in pivset)
    qb = QuotientBasis(X, s, ambient, ech, tuple(pivots), complement)
    assert len(qb) == h0_dim(X, s), (len(qb), h0_dim(X, s))
    return qb


# -- H^top model --------------------------------------------------------------

@dataclass(frozen=True)
class NegMonomialBasis:
    """Basis of ``H^n(P^n, O(j))``: inverse monomials ``x^a`` with every
    ``a_i <= -1`` and ``sum(a) = j``, ordered lexicographically in ``a``."""

    n: int
    j: int

    @property
    def dual_degree(self) -> int:
        return -self.j - self.n - 1

    @property
    def dual_monomials(self) -> tuple[tuple[int, ...], ...]:
        return _monomials(self.n + 1, self.dual_degree)[0]

    @property
    def monomials(self) -> list[tuple[int, ...]]:
        return [tuple(-b - 1 for b in mon) for mon in self.dual_monomials]

    def __len__(self) -> int:
        return len(self.dual_monomials)


def _times_f_matrix(f: MultiPoly, n: int, source_twist: int) -> np.ndarray:
    """Matrix of ``* f : H^n(O(j)) -> H^n(O(j + d))``; rows index the target."""
    src = NegMonomialBasis(n, source_twist)
    tgt = NegMonomialBasis(n, source_twist + f.degree)
    _, tindex = _monomials(n + 1, tgt.dual_degree)
    mat = np.zeros((len(tgt), len(src)), dtype=np.int64)
    if not len(tgt):
        return mat
    exps, coefs = _terms_array(f)
    for col, b in enumerate(src.dual_monomials):
        diff = np.asarray(b, dtype=np.int64) - exps
        ok = np.all(diff >= 0, axis=1)
        for row_exp, coef in zip(diff[ok], coefs[ok]):
            mat[tindex[tuple(int(x) for x in row_exp)], col] = coef
    return mat


@dataclass(frozen=True, eq=False)
class HtopKernel:
    """``H^{n-1}(X, O_X(m))`` as a subspace of ``H^n(P^n, O(m-d))``.

    Rows of ``vectors`` are the basis in ambient coordinates.  The basis is the
    one produced by :func:`kernel_basis_array`, so the coordinates of any
    kernel element are its entries at ``free``.
    """

    X: HypersurfaceDatum
    m: int
    ambient: NegMonomialBasis
    vectors: np.ndarray
    free: tuple[int, ...]

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def coordinates(self, ambient_vectors: np.ndarray) -> np.ndarray:
        return np.asarray(ambient_vectors, dtype=np.int64)[:, list(self.free)] % self.X.p


@lru_cache(maxsize=512)
def htop_kernel_basis(X: HypersurfaceDatum, m: int) -> HtopKernel:
    amb = NegMonomialBasis(X.n, m - X.d)
    mult = _times_f_matrix(X.f, X.n, m - X.d)
    if len(amb) == 0:
        vecs = np.zeros((0, 0), dtype=np.int64)
        free: tuple[int, ...] = ()
    else:
        vecs, free_cols = null_space(mult, X.p)
        free = tuple(free_cols)
    kern = HtopKernel(X, m, amb, vecs, free)
    # Serre duality: kernel of *f against the quotient-of-forms count
    assert len(kern) == htop_dim(X, m), (len(kern), htop_dim(X, m))
    return kern


# -- Frobenius maps --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FrobTwistMap:
    """Frobenius ``H^i(O_X(m)) -> H^i(O_X(pm))`` for ``i`` in ``{0, top}``.

    ``image`` holds the images of the source basis vectors, one per row, in
    coordinates over ``target_columns`` (a subset of an ambient monomial
    basis).  For level 0 those are the quotient-basis coordinates directly.
    For the top level the columns are the dual monomials that actually occur in
    ``H^n(P^n, O(pm-d))``; since the target cohomology embeds in that space,
    ranks can be read off ``image`` without building the target basis.
    ``matrix`` (columns = images of source basis vectors) is produced on
    demand.
    """

    X: HypersurfaceDatum
    level: int
    source_twist: int
    source_dim: int
    target_dim: int
    image: np.ndarray
    target_columns: tuple[tuple[int, ...], ...] = ()

    @property
    def target_twist(self) -> int:
        return self.X.p * self.source_twist

    @cached_property
    def rank(self) -> int:
        return rank_mod_p(self.image, self.X.p)

    @property
    def kernel_dim(self) -> int:
        return self.source_dim - self.rank

    @property
    def cokernel_dim(self) -> int:
        return self.target_dim - self.rank

    @property
    def is_injective(self) -> bool:
        return self.kernel_dim == 0

    @cached_property
    def matrix(self) -> FpMatrix:
        p = self.X.p
        if self.level == 0 or self.source_dim == 0 or self.target_dim == 0:
            mat = self.image.T if self.image.size else np.zeros((self.target_dim, self.source_dim))
            return FpMatrix(p, mat)
        tgt = htop_kernel_basis(self.X, self.target_twist)
        _, index = _monomials(self.X.nvars, tgt.ambient.dual_degree)
        full = np.zeros((self.source_dim, len(tgt.ambient)), dtype=np.int64)
        cols = [index[c] for c in self.target_columns]
        full[:, cols] = self.image
        return FpMatrix(p, tgt.coordinates(full).T)


def frobenius_h0_map(X: HypersurfaceDatum, s: int) -> FrobTwistMap:
    p = X.p
    src = h0_quotient_basis(X, s)
    tgt = h0_quotient_basis(X, p * s)
    if len(src) == 0:
        return FrobTwistMap(X, 0, s, 0, len(tgt), np.zeros((0, len(tgt)), dtype=np.int64))
    _, index = _monomials(X.nvars, p * s)
    amb = np.zeros((len(src), len(tgt.ambient)), dtype=np.int64)
    for r, mon in enumerate(src.basis):
        amb[r, index[tuple(p * e for e in mon)]] = 1
    image = tgt.reduce(amb)
    fmap = FrobTwistMap(X, 0, s, len(src), len(tgt), image)
    # S/(f) is reduced when X is smooth, so g^p in (f) forces g in (f)
    if X.smooth:
        assert fmap.rank == len(src), "Frobenius on H^0 is not injective"
    return fmap


def _frobenius_ambient_images(X: HypersurfaceDatum, m: int, kern: HtopKernel):
    """Images ``f^(p-1) x^(pa)`` of the ambient basis of ``H^n(P^n, O(m-d))``.

    Returns ``(A, columns)`` with ``A[i, k]`` the coefficient of dual monomial
    ``columns[k]`` in the image of the i-th ambient basis element.  ``A`` is a
    sparse CSR matrix: each row holds at most one entry per term of f^(p-1).
    """
    p, n = X.p, X.n
    exps, coefs = _terms_array(frobenius_kernel_poly(X.f))
    src = np.array(kern.ambient.dual_monomials, dtype=np.int64).reshape(-1, n + 1)
    shifted = p * src + (p - 1)
    tgt_deg = kern.ambient.dual_degree * p + (p - 1) * (n + 1) - X.d * (p - 1)
    base = tgt_deg + 1
    weights = base ** np.arange(n, -1, -1, dtype=np.int64)
    rows, keys, vals = [], [], []
    for i, t in enumerate(shifted):
        diff = t - exps
        ok = np.all(diff >= 0, axis=1)
        if not ok.any():
            continue
        rows.append(np.full(int(ok.sum()), i, dtype=np.int64))
        keys.append(diff[ok] @ weights)
        vals.append(coefs[ok])
    if not rows:
        return sp.csr_matrix((len(src), 0), dtype=np.int64), ()
    rows_a = np.concatenate(rows)
    keys_a = np.concatenate(keys)
    vals_a = np.concatenate(vals)
    uniq, cols = np.unique(keys_a, return_inverse=True)
    # decode keys back to exponent tuples; uniq is ascending, so flip to match
    # the decreasing-lex convention of monomial enumerations
    uniq = uniq[::-1]
    cols = len(uniq) - 1 - cols
    digits = (uniq[:, None] // weights[None, :]) % base
    columns = tuple(tuple(int(x) for x in row) for row in digits)
    A = sp.csr_matrix((vals_a, (rows_a, cols)), shape=(len(src), len(uniq)), dtype=np.int64)
    A.sum_duplicates()
    A.data %= p
    return A, columns


def _check_well_defined(X: HypersurfaceDatum, image: np.ndarray, columns) -> None:
    # f * image must vanish in H^n(P^n, O(pm))
    if image.size == 0 or not columns:
        return
    exps, coefs = _terms_array(X.f)
    cols = np.array(columns, dtype=np.int64)
    base = int(cols.max()) + 1
    weights = base ** np.arange(X.n, -1, -1, dtype=np.int64)
    r_idx, keys, vals = [], [], []
    for c, coef in zip(exps, coefs):
        diff = cols - c
        ok = np.all(diff >= 0, axis=1)
        r_idx.append(np.flatnonzero(ok))
        keys.append(diff[ok] @ weights)
        vals.append(np.full(int(ok.sum()), coef, dtype=np.int64))
    r_a = np.concatenate(r_idx)
    if r_a.size == 0:
        return
    uniq, c_a = np.unique(np.concatenate(keys), return_inverse=True)
    mult = sp.csr_matrix((np.concatenate(vals), (r_a, c_a)), shape=(len(columns), len(uniq)),
                         dtype=np.int64)
    prod = (mult.T @ image.T) % X.p
    if np.any(prod):
        raise AssertionError("Frobenius image is not annihilated by f")


def frobenius_htop_map(X: HypersurfaceDatum, m: int, verify: bool = True) -> FrobTwistMap:
    """Frobenius ``H^{n-1}(O_X(m)) -> H^{n-1}(O_X(pm))``."""
    kern = htop_kernel_basis(X, m)
    tdim = htop_dim(X, X.p * m)
    if len(kern) == 0:
        return FrobTwistMap(X, X.dim, m, 0, tdim, np.zeros((0, 0), dtype=np.int64))
    A, columns = _frobenius_ambient_images(X, m, kern)
    if A.shape[1]:
        image = np.asarray((A.T @ kern.vectors.T).T) % X.p
    else:
        image = np.zeros((len(kern), 0), dtype=np.int64)
    if verify:
        _check_well_defined(X, image, columns)
    return FrobTwistMap(X, X.dim, m, len(kern), tdim, image, columns)


def hasse_witt(X: HypersurfaceDatum) -> FpMatrix:
    """Frobenius on ``H^1(X, O_X)`` of a plane curve, g x g."""
    if X.n != 2:
        raise ValueError(f"Hasse-Witt matrix needs a plane curve, got n={X.n}")
    mat = frobenius_htop_map(X, 0).matrix
    assert mat.shape == (X.genus, X.genus)
    return mat


def cartier_omega_map(X: HypersurfaceDatum) -> FpMatrix:
    """Cartier operator on ``H^0(X, omega_X) = (S/(f))_{d-n-1}``.

    ``g Omega / f  ->  sum_b coeff(g f^(p-1), x^(p b + p - 1)) x^b Omega / f``.
    It is dual to Frobenius on ``H^{n-1}(O_X)``, so ranks agree; the
    computation goes through the quotient-of-forms model only.
    """
    p, k = X.p, X.canonical_level
    qb = h0_quotient_basis(X, k)
    if len(qb) == 0:
        return FpMatrix.zeros(p, 0, 0)
    fp1 = frobenius_kernel_poly(X.f)
    _, index = _monomials(X.nvars, k)
    amb = np.zeros((len(qb), len(qb.ambient)), dtype=np.int64)
    for r, mon in enumerate(qb.basis):
        g = MultiPoly.from_terms(p, X.nvars, {mon: 1})
        for e, c in (g * fp1).iter_terms():
            if all((x - (p - 1)) % p == 0 for x in e):
                b = tuple((x - (p - 1)) // p for x in e)
                amb[r, index[b]] = (amb[r, index[b]] + c) % p
    return FpMatrix(p, qb.reduce(amb).T)


# -- B^1 ----------------------------------------------------------------------

@dataclass(frozen=True)
class B1Row:
    """``h^i(X, B1_X(s))`` for ``i = 0 .. dim X``."""

    twist: int
    h: tuple[int, ...]

    @property
    def euler(self) -> int:
        return sum((-1) ** i * v for i, v in enumerate(self.h))

    def as_dict(self) -> dict:
        return {"twist": self.twist, "h": list(self.h)}


@dataclass(frozen=True)
class B1Table:
    rows: tuple[B1Row, ...]

    def __getitem__(self, s: int) -> B1Row:
        for r in self.rows:
            if r.twist == s:
                return r
        raise KeyError(s)

    @property
    def twists(self) -> list[int]:
        return [r.twist for r in self.rows]

    def as_dict(self) -> dict:
        return {str(r.twist): list(r.h) for r in self.rows}


def chi_b1(X: HypersurfaceDatum, s: int) -> int:
    return chi_line(X, X.p * s) - chi_line(X, s)


def b1_dims(X: HypersurfaceDatum, s: int) -> B1Row:
    N = X.dim
    if N < 1:
        raise ValueError("B1 dimensions need dim X >= 1")
    p = X.p
    F = frobenius_htop_map(X, s)
    h = [0] * (N + 1)
    h[0] = h0_dim(X, p * s) - h0_dim(X, s)
    if N == 1:
        h[0] += F.kernel_dim
    else:
        h[N - 1] = F.kernel_dim
    h[N] = htop_dim(X, p * s) - F.rank
    row = B1Row(s, tuple(h))
    assert row.euler == chi_b1(X, s), (row, chi_b1(X, s))
    return row


def b1_table(X: HypersurfaceDatum, twists: Sequence[int]) -> B1Table:
    return B1Table(tuple(b1_dims(X, s) for s in sorted(set(twists))))


def pushforward_twist_dims(X: HypersurfaceDatum, m: int) -> tuple[int, ...]:
    """``h^i(F_* O_X (m)) = h^i(O_X(pm))`` (projection formula)."""
    return line_dims(X, X.p * m)
