"""Sparse multivariate polynomials over a prime field F_p.

Terms are kept in a dict keyed by a *packed* exponent vector: exponent of
``x_i`` lives in a fixed 16-bit field, ``x0`` in the most significant one.
Adding two keys multiplies the monomials, multiplying a key by ``k`` raises
the monomial to the ``k``-th power, and integer comparison of keys is
lexicographic comparison of exponent tuples.  The price is a hard cap on
exponents (``MAX_EXPONENT``); products that would exceed it raise
``OverflowError`` instead of silently corrupting neighbouring fields.

Example::

    >>> f = poly_parse("x0^3 + x1^3 + x2^3", 7, 3)
    >>> poly_coeff(poly_pow(f, 6), (6, 6, 6))
    6
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

FIELD_BITS = 16
MAX_EXPONENT = (1 << FIELD_BITS) - 1
MAX_MODULUS = 1 << 31
_MASK = MAX_EXPONENT


class ParseError(ValueError):
    """Raised on malformed polynomial text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    q = 3
    while q * q <= p:
        if p % q == 0:
            return False
        q += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p!r}")
    if p >= MAX_MODULUS:
        raise ValueError(f"modulus {p} exceeds the 2^31 guard")
    return p


@dataclass(frozen=True)
class FpScalar:
    """An element of F_p.  Most of the package works with bare ints in
    ``range(p)``; this wrapper exists for callers who want the modulus
    carried along."""

    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def __add__(self, other: "FpScalar") -> "FpScalar":
        self._same(other)
        return FpScalar(self.value + other.value, self.p)

    def __sub__(self, other: "FpScalar") -> "FpScalar":
        self._same(other)
        return FpScalar(self.value - other.value, self.p)

    def __mul__(self, other: "FpScalar") -> "FpScalar":
        self._same(other)
        return FpScalar(self.value * other.value, self.p)

    def __neg__(self) -> "FpScalar":
        return FpScalar(-self.value, self.p)

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpScalar(pow(self.value, -1, self.p), self.p)

    def __int__(self) -> int:
        return self.value

    def _same(self, other: "FpScalar") -> None:
        if self.p != other.p:
            raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")


# -- packed exponent keys -------------------------------------------------

def pack(exponents: Sequence[int]) -> int:
    key = 0
    for e in exponents:
        if e < 0 or e > MAX_EXPONENT:
            raise OverflowError(f"exponent {e} outside [0, {MAX_EXPONENT}]")
        key = (key << FIELD_BITS) | e
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    out = [0] * nvars
    for i in range(nvars - 1, -1, -1):
        out[i] = key & _MASK
        key >>= FIELD_BITS
    return tuple(out)


def monomials_of_degree(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of the given total degree, in decreasing
    lexicographic order (``x0^degree`` first).  Empty for negative degree."""
    if degree < 0:
        return []
    if nvars == 0:
        return [()] if degree == 0 else []
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], left: int, slots: int) -> None:
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for e in range(left, -1, -1):
            rec(prefix + [e], left - e, slots - 1)

    rec([], degree, nvars)
    return out


# -- the polynomial type --------------------------------------------------

class MultiPoly:
    """Immutable sparse polynomial over F_p in ``nvars`` variables.

    Build instances with :func:`poly_parse`, :meth:`from_terms` or
    :meth:`constant`; the constructor trusts its input and is internal.
    """

    __slots__ = ("p", "nvars", "_terms", "_degree", "_homogeneous")

    def __init__(self, p: int, nvars: int, packed_terms: dict[int, int]):
        self.p = p
        self.nvars = nvars
        self._terms = packed_terms
        degs = {self._key_degree(k) for k in packed_terms}
        self._homogeneous = len(degs) <= 1
        self._degree = max(degs) if degs else -1

    # construction
    @classmethod
    def from_terms(cls, p: int, nvars: int,
                   terms: Mapping[Sequence[int], int] | Iterable[tuple[Sequence[int], int]]) -> "MultiPoly":
        check_prime(p)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for exps, c in items:
            if len(exps) != nvars:
                raise ValueError(f"monomial {tuple(exps)} does not have {nvars} variables")
            k = pack(exps)
            acc[k] = (acc.get(k, 0) + c) % p
        return cls(p, nvars, {k: c for k, c in acc.items() if c})

    @classmethod
    def constant(cls, p: int, nvars: int, c: int = 1) -> "MultiPoly":
        check_prime(p)
        c %= p
        return cls(p, nvars, {0: c} if c else {})

    @classmethod
    def zero(cls, p: int, nvars: int) -> "MultiPoly":
        return cls.constant(p, nvars, 0)

    # inspection
    def _key_degree(self, key: int) -> int:
        s = 0
        while key:
            s += key & _MASK
            key >>= FIELD_BITS
        return s

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return self._degree

    @property
    def is_homogeneous(self) -> bool:
        return self._homogeneous

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def packed_terms(self) -> Mapping[int, int]:
        return self._terms

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        """Canonical term dict, graded-lex descending."""
        return dict(self.iter_terms())

    def iter_terms(self) -> Iterator[tuple[tuple[int, ...], int]]:
        keys = sorted(self._terms, key=lambda k: (self._key_degree(k), k), reverse=True)
        for k in keys:
            yield unpack(k, self.nvars), self._terms[k]

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.p, self.nvars, self._terms) == (other.p, other.nvars, other._terms)

    def __hash__(self) -> int:
        return hash((self.p, self.nvars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly(p={self.p}, {self.to_text()!r})"

    def to_text(self) -> str:
        """Render in the input grammar, so ``poly_parse(f.to_text())`` round-trips."""
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.iter_terms():
            factors = [f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    # arithmetic sugar
    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        return poly_add(self, other)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return poly_add(self, poly_scale(other, -1))

    def __neg__(self) -> "MultiPoly":
        return poly_scale(self, -1)

    def __mul__(self, other: "MultiPoly | int") -> "MultiPoly":
        if isinstance(other, int):
            return poly_scale(self, other)
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "MultiPoly":
        return poly_pow(self, e)


def _check_compatible(a: MultiPoly, b: MultiPoly) -> None:
    if a.p != b.p:
        raise ValueError(f"modulus mismatch: {a.p} vs {b.p}")
    if a.nvars != b.nvars:
        raise ValueError(f"variable count mismatch: {a.nvars} vs {b.nvars}")


def _guard_degree(deg: int) -> None:
    # a field can only overflow if some exponent, hence the total degree, does
    if deg > MAX_EXPONENT:
        raise OverflowError(f"degree {deg} exceeds packed exponent width")


def poly_add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    _check_compatible(a, b)
    p = a.p
    out = dict(a.packed_terms)
    for k, c in b.packed_terms.items():
        v = (out.get(k, 0) + c) % p
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return MultiPoly(p, a.nvars, out)


def poly_scale(a: MultiPoly, c: int) -> MultiPoly:
    c %= a.p
    if c == 0:
        return MultiPoly.zero(a.p, a.nvars)
    return MultiPoly(a.p, a.nvars, {k: v * c % a.p for k, v in a.packed_terms.items()})


def poly_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    _check_compatible(a, b)
    if a.is_zero or b.is_zero:
        return MultiPoly.zero(a.p, a.nvars)
    _guard_degree(a.degree + b.degree)
    p = a.p
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    big_items = list(big.packed_terms.items())
    acc: dict[int, int] = {}
    get = acc.get
    for ka, ca in small.packed_terms.items():
        for kb, cb in big_items:
            k = ka + kb
            acc[k] = get(k, 0) + ca * cb
    return MultiPoly(p, a.nvars, {k: v % p for k, v in acc.items() if v % p})


def frobenius_scale(f: MultiPoly, q: int) -> MultiPoly:
    """Exponents multiplied by ``q`` (a power of p), coefficients unchanged:
    over F_p this is ``f**q``."""
    if q == 1 or f.is_zero:
        return f
    _guard_degree(f.degree * q)
    return MultiPoly(f.p, f.nvars, {k * q: c for k, c in f.packed_terms.items()})


def _binary_pow(f: MultiPoly, e: int) -> MultiPoly:
    result = MultiPoly.constant(f.p, f.nvars, 1)
    base = f
    while e:
        if e & 1:
            result = poly_mul(result, base)
        e >>= 1
        if e:
            base = poly_mul(base, base)
    return result


def poly_pow(f: MultiPoly, e: int) -> MultiPoly:
    """``f**e`` via base-p digits: each digit power is done by binary powering
    and then lifted by exponent scaling (the Frobenius identity)."""
    if e < 0:
        raise ValueError("negative exponent")
    if e == 0:
        return MultiPoly.constant(f.p, f.nvars, 1)
    if f.is_zero:
        return f
    _guard_degree(f.degree * e)
    p = f.p
    result = MultiPoly.constant(p, f.nvars, 1)
    q = 1
    while e:
        digit = e % p
        if digit:
            result = poly_mul(result, frobenius_scale(_binary_pow(f, digit), q))
        e //= p
        q *= p
    return result


def poly_coeff(f: MultiPoly, m: Sequence[int]) -> int:
    if len(m) != f.nvars:
        raise ValueError(f"monomial {tuple(m)} does not have {f.nvars} variables")
    if any(e < 0 or e > MAX_EXPONENT for e in m):
        return 0
    return f.packed_terms.get(pack(m), 0)


def poly_partials(f: MultiPoly) -> list[MultiPoly]:
    p, nv = f.p, f.nvars
    out = []
    for i in range(nv):
        shift = FIELD_BITS * (nv - 1 - i)
        one = 1 << shift
        acc: dict[int, int] = {}
        for k, c in f.packed_terms.items():
            e = (k >> shift) & _MASK
            v = e * c % p
            if v:
                acc[k - one] = v
        out.append(MultiPoly(p, nv, acc))
    return out


def poly_permute(f: MultiPoly, perm: Sequence[int]) -> MultiPoly:
    """Substitute ``x_i -> x_{perm[i]}``."""
    if sorted(perm) != list(range(f.nvars)):
        raise ValueError(f"not a permutation of {f.nvars} variables: {perm}")
    terms = []
    for exps, c in f.iter_terms():
        new = [0] * f.nvars
        for i, e in enumerate(exps):
            new[perm[i]] = e
        terms.append((new, c))
    return MultiPoly.from_terms(f.p, f.nvars, terms)


# -- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(x)(\d+)|(\^)|(\*)|([+-]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            skip = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + skip]!r}", pos + skip)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), start))
        elif m.group(2) is not None:
            tokens.append(("var", m.group(3), start))
        elif m.group(4):
            tokens.append(("^", "^", start))
        elif m.group(5):
            tokens.append(("*", "*", start))
        else:
            tokens.append(("sign", m.group(6), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def poly_parse(text: str, p: int, nvars: int) -> MultiPoly:
    """Parse ``term (('+'|'-') term)*`` where a term is
    ``[sign] [integer '*'] factor ('*' factor)*`` and a factor ``x<i>[^<k>]``.

    A bare integer is also accepted as a constant term.
    """
    check_prime(p)
    toks = _tokenize(text)
    i = 0
    acc: dict[tuple[int, ...], int] = {}

    def expect_factor(j: int, exps: list[int]) -> int:
        kind, val, pos = toks[j]
        if kind != "var":
            raise ParseError("expected a variable x<i>", pos)
        idx = int(val)
        if idx >= nvars:
            raise ParseError(f"variable x{idx} out of range for {nvars} variables", pos)
        j += 1
        e = 1
        if toks[j][0] == "^":
            j += 1
            kind, val, pos = toks[j]
            if kind != "int":
                raise ParseError("expected an integer exponent", pos)
            e = int(val)
            j += 1
        exps[idx] += e
        return j

    first = True
    while True:
        sign = 1
        kind, val, pos = toks[i]
        if kind == "sign":
            sign = -1 if val == "-" else 1
            i += 1
        elif not first:
            raise ParseError("expected '+' or '-'", pos)
        if kind == "end" and first:
            raise ParseError("empty polynomial", pos)
        if not first and toks[i][0] == "sign":
            # "a + -b": separator followed by the term's own sign
            sign *= -1 if toks[i][1] == "-" else 1
            i += 1
        first = False
        exps = [0] * nvars
        coeff = 1
        kind, val, pos = toks[i]
        if kind == "int":
            coeff = int(val)
            i += 1
            if toks[i][0] == "*":
                i = expect_factor(i + 1, exps)
            elif toks[i][0] not in ("sign", "end"):
                raise ParseError("expected '*' after coefficient", toks[i][2])
        else:
            i = expect_factor(i, exps)
        while toks[i][0] == "*":
            i = expect_factor(i + 1, exps)
        key = tuple(exps)
        acc[key] = acc.get(key, 0) + sign * coeff
        kind, val, pos = toks[i]
        if kind == "end":
            break
        if kind != "sign":
            raise ParseError(f"unexpected token {val!r}", pos)
    return MultiPoly.from_terms(p, nvars, acc)
