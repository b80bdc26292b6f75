"""Independent reference computations used to freeze expected values.

Nothing here imports the package's arithmetic: polynomials are plain dicts of
exponent tuples, expanded by repeated multiplication, and point counts are
brute force over F_p.
"""
from __future__ import annotations

import itertools
from math import factorial


def naive_mul(a: dict, b: dict, p: int) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % p
    return {e: c for e, c in out.items() if c}


def naive_pow(a: dict, e: int, p: int, nvars: int) -> dict:
    out = {(0,) * nvars: 1 % p}
    for _ in range(e):
        out = naive_mul(out, a, p)
    return out


def multinomial(*ks: int) -> int:
    out = factorial(sum(ks))
    for k in ks:
        out //= factorial(k)
    return out


def evaluate(poly: dict, point, p: int) -> int:
    total = 0
    for e, c in poly.items():
        term = c
        for x, k in zip(point, e):
            term = term * pow(x, k, p) % p
        total += term
    return total % p


def projective_points(p: int, nvars: int):
    for v in itertools.product(range(p), repeat=nvars):
        nz = next((x for x in v if x), None)
        if nz == 1:  # normalised: first nonzero coordinate is 1
            yield v


def count_points(poly: dict, p: int, nvars: int) -> int:
    return sum(1 for v in projective_points(p, nvars) if evaluate(poly, v, p) == 0)


def coefficient_from_point_count(poly: dict, p: int, nvars: int) -> int:
    """For a form of degree ``nvars`` the affine cone count satisfies
    ``1 + (p-1) #X = N_aff = -sum_v f(v)^(p-1) = (-1)^nvars * c (mod p)`` where
    ``c`` is the coefficient of ``(x_0...x_n)^(p-1)`` in ``f^(p-1)``."""
    n_points = count_points(poly, p, nvars)
    # 1 - #X = -(-1)^nvars * c
    return (-(1 - n_points) * (-1) ** nvars) % p


def elliptic_trace_mod_p(poly: dict, p: int) -> int:
    """``a_p = p + 1 - #E(F_p)`` reduced mod p, for a smooth plane cubic."""
    return (p + 1 - count_points(poly, p, 3)) % p
