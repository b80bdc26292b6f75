"""Built-in hypersurface families, a smoothness test, and two oracles for
genus-one curves that never touch the cohomology models.

The oracles:

* :func:`cartier_manin_hyperelliptic` reads the Cartier-Manin matrix of
  ``y^2 = h(x)`` off the coefficients of ``h^((p-1)/2)``;
* :func:`deuring_hasse` evaluates the Hasse invariant of the Legendre curve
  ``y^2 = x(x-1)(x-lambda)`` in closed form.
"""
from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Any, Sequence

import numpy as np

from .cohom import HypersurfaceDatum, _monomials, _terms_array
from .matfp import FpMatrix, rank_mod_p
from .polyfp import MultiPoly, check_prime, monomials_of_degree, poly_partials


class SingularFamilyError(ValueError):
    """The requested family member is singular by a closed-form criterion."""


class RetryBudgetExceeded(RuntimeError):
    pass


FAMILY_KINDS = ("fermat", "dwork", "legendre-cubic", "random-plane-curve",
                "random-hypersurface", "hyperelliptic", "custom")


@dataclass(frozen=True)
class FamilySpec:
    """Exact recipe for a family member; ``to_json`` is canonical (sorted keys,
    no whitespace) so it doubles as an identity key for scan files."""

    kind: str
    p: int
    n: int | None = None
    d: int | None = None
    lam: int | None = None
    seed: int | None = None
    coeffs: tuple[int, ...] | None = None
    poly: str | None = None

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.coeffs is not None:
            object.__setattr__(self, "coeffs", tuple(self.coeffs))

    def as_dict(self) -> dict[str, Any]:
        out = {k: v for k, v in asdict(self).items() if v is not None}
        if "coeffs" in out:
            out["coeffs"] = list(out["coeffs"])
        return out

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "FamilySpec":
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "FamilySpec":
        return cls.from_dict(json.loads(text))

    def build(self) -> HypersurfaceDatum:
        k = self.kind
        if k == "fermat":
            return make_fermat(self.p, self.n, self.d)
        if k == "dwork":
            return make_dwork(self.p, self.n, self.lam)
        if k == "legendre-cubic":
            return make_legendre_cubic(self.p, self.lam)
        if k == "random-plane-curve":
            return random_plane_curve(self.p, self.d, self.seed)
        if k == "random-hypersurface":
            return random_hypersurface(self.p, self.n, self.d, self.seed)
        if k == "custom":
            from .polyfp import poly_parse
            f = poly_parse(self.poly, self.p, self.n + 1)
            return HypersurfaceDatum(self.p, self.n, f, label=f"custom: {self.poly}")
        raise ValueError(f"family {k!r} does not describe a hypersurface")


# -- families -----------------------------------------------------------------

def _power_sum(p: int, nvars: int, d: int) -> dict[tuple[int, ...], int]:
    terms = {}
    for i in range(nvars):
        e = [0] * nvars
        e[i] = d
        terms[tuple(e)] = 1
    return terms


def make_fermat(p: int, n: int, d: int | None = None) -> HypersurfaceDatum:
    """``x_0^d + ... + x_n^d``; ``d`` defaults to ``n + 1``."""
    check_prime(p)
    d = n + 1 if d is None else d
    if d % p == 0:
        raise SingularFamilyError(f"Fermat hypersurface of degree {d} is singular in characteristic {p}")
    f = MultiPoly.from_terms(p, n + 1, _power_sum(p, n + 1, d))
    return HypersurfaceDatum(p, n, f, label=f"fermat(p={p}, n={n}, d={d})", smooth=True)


def dwork_is_singular(p: int, n: int, lam: int) -> bool:
    """Closed form: singular exactly when ``lam^(n+1) = (n+1)^(n+1)`` in F_p."""
    return pow(lam, n + 1, p) == pow(n + 1, n + 1, p)


def make_dwork(p: int, n: int, lam: int) -> HypersurfaceDatum:
    """``x_0^(n+1) + ... + x_n^(n+1) - lam x_0 ... x_n``."""
    check_prime(p)
    if (n + 1) % p == 0:
        raise SingularFamilyError(f"Dwork pencil degenerates when p divides n+1 ({p} | {n + 1})")
    lam %= p
    terms = _power_sum(p, n + 1, n + 1)
    terms[(1,) * (n + 1)] = -lam
    f = MultiPoly.from_terms(p, n + 1, terms)
    return HypersurfaceDatum(p, n, f, label=f"dwork(p={p}, n={n}, lambda={lam})",
                             smooth=not dwork_is_singular(p, n, lam))


def make_legendre_cubic(p: int, lam: int) -> HypersurfaceDatum:
    """``y^2 z - x (x - z)(x - lam z)`` with ``(x, y, z) = (x0, x1, x2)``."""
    check_prime(p)
    if p == 2:
        raise ValueError("the Legendre model needs odd characteristic")
    lam %= p
    if lam in (0, 1):
        raise SingularFamilyError("Legendre cubic is singular for lambda in {0, 1}")
    # x(x - z)(x - lam z) = x^3 - (1 + lam) x^2 z + lam x z^2
    terms = {(0, 2, 1): 1, (3, 0, 0): -1, (2, 0, 1): 1 + lam, (1, 0, 2): -lam}
    f = MultiPoly.from_terms(p, 3, terms)
    return HypersurfaceDatum(p, 2, f, label=f"legendre(p={p}, lambda={lam})", smooth=True)


def random_hypersurface(p: int, n: int, d: int, seed: int, max_tries: int = 50) -> HypersurfaceDatum:
    """Dense random degree-``d`` form, redrawn from the same stream until smooth."""
    check_prime(p)
    rng = random.Random(f"charp:{p}:{n}:{d}:{seed}")
    mons = monomials_of_degree(n + 1, d)
    for attempt in range(max_tries):
        coeffs = [rng.randrange(p) for _ in mons]
        f = MultiPoly.from_terms(p, n + 1, zip(mons, coeffs))
        if f.is_zero:
            continue
        X = HypersurfaceDatum(p, n, f, label=f"random(p={p}, n={n}, d={d}, seed={seed}, try={attempt})")
        if is_smooth(X).value:
            return HypersurfaceDatum(p, n, f, label=X.label, smooth=True)
    raise RetryBudgetExceeded(f"no smooth sample in {max_tries} draws (p={p}, n={n}, d={d}, seed={seed})")


def random_plane_curve(p: int, d: int, seed: int, max_tries: int = 50) -> HypersurfaceDatum:
    return random_hypersurface(p, 2, d, seed, max_tries)


# -- smoothness -----------------------------------------------------------------

@dataclass
class SmoothnessVerdict:
    value: bool
    degree_reached: int
    cutoff: int
    quotient_dims: list[int] = field(default_factory=list)
    singular_point: tuple[int, ...] | None = None

    @property
    def label(self) -> str:
        if self.value:
            return "smooth"
        if self.singular_point is not None:
            return f"singular at {list(self.singular_point)}"
        return f"singular (at cutoff {self.cutoff})"


def smoothness_cutoff(X: HypersurfaceDatum) -> int:
    n, d, p = X.n, X.d, X.p
    if d % p == 0:
        return (n + 1) * d + 1
    return (n + 1) * (d - 1) + 1


RATIONAL_SEARCH_LIMIT = 200_000


def _projective_points(p: int, nvars: int) -> np.ndarray:
    """One normalised representative (first nonzero coordinate 1) per point."""
    blocks = []
    for lead in range(nvars):
        tail = nvars - lead - 1
        grid = np.indices((p,) * tail).reshape(tail, -1).T if tail else np.zeros((1, 0), dtype=np.int64)
        block = np.zeros((len(grid), nvars), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = grid
        blocks.append(block)
    return np.concatenate(blocks)


def _evaluate(g: MultiPoly, pts: np.ndarray) -> np.ndarray:
    p = g.p
    out = np.zeros(len(pts), dtype=np.int64)
    for exps, c in g.iter_terms():
        term = np.full(len(pts), c, dtype=np.int64)
        for i, e in enumerate(exps):
            for _ in range(e):
                term = term * pts[:, i] % p
        out = (out + term) % p
    return out


def rational_singular_point(X: HypersurfaceDatum) -> tuple[int, ...] | None:
    """An F_p-point where ``f`` and every partial vanish, if one exists.
    Only searched when there are at most ``RATIONAL_SEARCH_LIMIT`` points."""
    p, nv = X.p, X.nvars
    if sum(p ** k for k in range(nv)) > RATIONAL_SEARCH_LIMIT:
        return None
    pts = _projective_points(p, nv)
    alive = np.ones(len(pts), dtype=bool)
    for g in [X.f, *poly_partials(X.f)]:
        if g.is_zero:
            continue
        alive[alive] = _evaluate(g, pts[alive]) == 0
        if not alive.any():
            return None
    return tuple(int(x) for x in pts[np.flatnonzero(alive)[0]])


def is_smooth(X: HypersurfaceDatum) -> SmoothnessVerdict:
    """Jacobian criterion: the ideal ``(f, df/dx_0, ..., df/dx_n)`` contains
    every form of some degree ``t <= cutoff`` exactly when ``V(f)`` has no
    singular point over the algebraic closure.

    A rational singular point, when one exists, settles the question without
    the graded sweep (a random singular member usually has a single node,
    which is then defined over F_p)."""
    p, nv = X.p, X.nvars
    gens = [g for g in [X.f, *poly_partials(X.f)] if not g.is_zero]
    cutoff = smoothness_cutoff(X)
    point = rational_singular_point(X)
    if point is not None:
        return SmoothnessVerdict(False, 0, cutoff, [], point)
    dims = []
    for t in range(1, cutoff + 1):
        amb, _ = _monomials(nv, t)
        weights = (t + 1) ** np.arange(nv - 1, -1, -1, dtype=np.int64)
        amb_keys = np.array(amb, dtype=np.int64) @ weights
        order = np.argsort(amb_keys)
        rows = []
        for g in gens:
            lower, _ = _monomials(nv, t - g.degree)
            if not lower:
                continue
            exps, coefs = _terms_array(g)
            # column of mon * x^c, located through base-(t+1) monomial keys
            keys = np.array(lower, dtype=np.int64) @ weights
            cols = order[np.searchsorted(amb_keys, keys[:, None] + exps @ weights, sorter=order)]
            block = np.zeros((len(lower), len(amb)), dtype=np.int64)
            np.put_along_axis(block, cols, coefs[None, :], axis=1)
            rows.append(block)
        rank = rank_mod_p(np.concatenate(rows), p) if rows else 0
        q = len(amb) - rank
        dims.append(q)
        if q == 0:
            return SmoothnessVerdict(True, t, cutoff, dims)
    return SmoothnessVerdict(False, cutoff, cutoff, dims)


# -- oracles ----------------------------------------------------------------------

def _upoly_pow(h: Sequence[int], e: int, p: int) -> list[int]:
    """Dense univariate power, coefficients low degree first."""
    out = [1]
    for _ in range(e):
        nxt = [0] * (len(out) + len(h) - 1)
        for i, a in enumerate(out):
            if a:
                for j, b in enumerate(h):
                    nxt[i + j] = (nxt[i + j] + a * b) % p
        out = nxt
    return out


def cartier_manin_hyperelliptic(p: int, h: Sequence[int], g: int) -> FpMatrix:
    """Cartier-Manin matrix of ``y^2 = h(x)``, ``h`` given low degree first.

    Entry ``(i, j)`` (1-based) is the coefficient of ``x^(i p - j)`` in
    ``h^((p-1)/2)``.
    """
    check_prime(p)
    if p == 2:
        raise ValueError("Cartier-Manin via h^((p-1)/2) needs odd p")
    h = [c % p for c in h]
    while h and h[-1] == 0:
        h.pop()
    if len(h) - 1 != 2 * g + 1:
        raise ValueError(f"expected deg h = {2 * g + 1}, got {len(h) - 1}")
    power = _upoly_pow(h, (p - 1) // 2, p)
    entry = lambda k: power[k] if 0 <= k < len(power) else 0
    rows = [[entry(i * p - j) for j in range(1, g + 1)] for i in range(1, g + 1)]
    return FpMatrix.from_rows(p, rows)


def deuring_hasse(p: int, lam: int) -> int:
    """``H(lam) = sum_i C((p-1)/2, i)^2 lam^i`` mod p."""
    check_prime(p)
    if p == 2:
        raise ValueError("Deuring polynomial needs odd p")
    lam %= p
    if lam in (0, 1):
        raise SingularFamilyError("Legendre curve is singular for lambda in {0, 1}")
    k = (p - 1) // 2
    return sum(comb(k, i) ** 2 * pow(lam, i, p) for i in range(k + 1)) % p


def legendre_h(lam: int) -> list[int]:
    """``x (x - 1)(x - lam)`` low degree first."""
    return [0, lam, -(1 + lam), 1]
