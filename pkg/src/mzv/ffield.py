"""Finite fields F_q = F_p[x]/(f) and base-p digit combinatorics.

Elements are stored as coordinate tuples with respect to the power basis
``1, x, ..., x^(n-1)`` of the modulus ``f``.  When no modulus is supplied the
canonical one is used: among monic irreducible polynomials of degree ``n``,
the one whose coefficient list (constant term first) read as a base-``p``
integer is smallest.

Every context also carries a matching python-flint field so that the
polynomial layer can do heavy arithmetic in C; both views share the same
modulus, hence the same coordinates.
"""
from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import flint

from .errors import CompositeP, DegreeMismatch, ReducibleModulus

INT_BOUND = 2**63


def _check_bound(*values: int) -> None:
    for v in values:
        if v >= INT_BOUND:
            raise OverflowError(f"integer {v} exceeds the 2^63 working bound")


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


# -- small dense polynomial helpers over F_p (coefficient lists, constant first)

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pmod(a, m, p):
    a = list(a)
    inv = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(_trim(a)) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return a


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, m, p):
    result, base = [1], _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Ben-Or test: ``f`` has no factor of degree ``i <= deg f / 2``."""
    f = _trim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    h = [0, 1]
    for _ in range(n // 2):
        h = _ppowmod(h, p, f, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(f, _trim(diff), p)
        if len(g) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def canonical_modulus(p: int, n: int) -> tuple[int, ...]:
    if n == 1:
        return (0, 1)
    for value in range(p**n):
        coeffs = [(value // p**i) % p for i in range(n)] + [1]
        if coeffs[0] and is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FieldCtx:
    """The field F_q with ``q = p**n`` and a fixed monic irreducible modulus."""

    def __init__(self, p: int, n: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise CompositeP(f"{p} is not prime")
        if n < 1:
            raise DegreeMismatch("extension degree must be >= 1")
        if modulus is None:
            modulus = canonical_modulus(p, n)
        else:
            modulus = tuple(c % p for c in modulus)
            modulus = tuple(_trim(list(modulus)))
            if len(modulus) - 1 != n:
                raise DegreeMismatch(f"modulus has degree {len(modulus) - 1}, expected {n}")
            if modulus[-1] != 1:
                raise DegreeMismatch("modulus must be monic")
            if not is_irreducible(modulus, p):
                raise ReducibleModulus(f"{modulus} is reducible over F_{p}")
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = tuple(modulus)

    # identity -------------------------------------------------------------
    def _key(self):
        return (self.p, self.n, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.n == 1:
            return f"FieldCtx(F_{self.p})"
        return f"FieldCtx(F_{self.q}, modulus={list(self.modulus)})"

    def __reduce__(self):
        return (FieldCtx, (self.p, self.n, self.modulus))

    @property
    def is_prime_field(self) -> bool:
        return self.n == 1

    # flint bridge ---------------------------------------------------------
    @cached_property
    def flint(self):
        """Matching ``flint.fq_default_ctx``."""
        mod = flint.fmpz_mod_poly_ctx(self.p)(list(self.modulus))
        return flint.fq_default_ctx(modulus=mod)

    @cached_property
    def flint_poly(self):
        return flint.fq_default_poly_ctx(self.flint)

    def to_flint(self, e: FieldElem):
        return self.flint(list(e.coords))

    def from_flint(self, x) -> FieldElem:
        coords = [int(c) for c in x.to_list()]
        coords += [0] * (self.n - len(coords))
        return FieldElem(self, tuple(coords[: self.n]))

    # constructors ---------------------------------------------------------
    def __call__(self, value) -> FieldElem:
        if isinstance(value, FieldElem):
            if value.ctx != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElem(self, (value % self.p,) + (0,) * (self.n - 1))
        coords = [int(c) % self.p for c in value]
        if len(coords) > self.n:
            raise DegreeMismatch("too many coordinates")
        coords += [0] * (self.n - len(coords))
        return FieldElem(self, tuple(coords))

    @property
    def zero(self) -> FieldElem:
        return self(0)

    @property
    def one(self) -> FieldElem:
        return self(1)

    @property
    def gen(self) -> FieldElem:
        """The class of ``x``; for a prime field this is 0 (modulus ``x``)."""
        if self.n == 1:
            return self(0)
        return self([0, 1])

    def element(self, index: int) -> FieldElem:
        """Element whose coordinates are the base-p digits of ``index``."""
        return FieldElem(self, tuple((index // self.p**i) % self.p for i in range(self.n)))

    def elements(self) -> Iterator[FieldElem]:
        for i in range(self.q):
            yield self.element(i)


class FieldElem:
    """An element of F_q; immutable."""

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx: FieldCtx, coords: tuple[int, ...]):
        self.ctx = ctx
        self.coords = coords

    def _coerce(self, other) -> FieldElem:
        if isinstance(other, FieldElem):
            return other
        if isinstance(other, int):
            return self.ctx(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((x + y) % p for x, y in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((-x) % p for x in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        prod = _pmul(list(self.coords), list(other.coords), ctx.p)
        if ctx.n > 1:
            prod = _pmod(prod, ctx.modulus, ctx.p)
        return ctx(prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ctx.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> FieldElem:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in F_q")
        return self ** (self.ctx.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def frobenius(self, k: int = 1) -> FieldElem:
        return self ** (self.ctx.p**k)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self):
        return not self.is_zero()

    def in_prime_field(self) -> bool:
        return not any(self.coords[1:])

    def __int__(self):
        if not self.in_prime_field():
            raise ValueError(f"{self} is not in the prime field")
        return self.coords[0]

    def index(self) -> int:
        """Inverse of :meth:`FieldCtx.element`."""
        return sum(c * self.ctx.p**i for i, c in enumerate(self.coords))

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx(other)
        return isinstance(other, FieldElem) and self.ctx == other.ctx and self.coords == other.coords

    def __hash__(self):
        return hash((self.ctx, self.coords))

    def __repr__(self):
        if self.ctx.n == 1:
            return str(self.coords[0])
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
                terms.append(str(c) if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return "+".join(reversed(terms)) or "0"


def field_create(p: int, n: int = 1, modulus: Sequence[int] | None = None) -> FieldCtx:
    return FieldCtx(p, n, modulus)


def field_from_q(q: int) -> FieldCtx:
    """Field of order ``q`` with canonical modulus."""
    for p in range(2, q + 1):
        if q % p == 0:
            n, r = 0, q
            while r % p == 0:
                r //= p
                n += 1
            if r != 1:
                raise CompositeP(f"{q} is not a prime power")
            return FieldCtx(p, n)
    raise CompositeP(f"{q} is not a prime power")


# -- digit combinatorics ---------------------------------------------------

def base_p_digits(m: int, p: int) -> list[int]:
    """Base-``p`` digits of ``m``, least significant first; ``[]`` for 0.

    >>> base_p_digits(17, 5)
    [2, 3]
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    _check_bound(m)
    digits = []
    while m:
        m, r = divmod(m, p)
        digits.append(r)
    return digits


def lucas_binom(n: int, k: int, p: int) -> int:
    """``C(n, k) mod p`` computed digit by digit (Lucas' theorem)."""
    if n < 0 or k < 0:
        raise ValueError("arguments must be non-negative")
    _check_bound(n, k)
    result = 1
    while n or k:
        n, ni = divmod(n, p)
        k, ki = divmod(k, p)
        if ki > ni:
            return 0
        result = result * _small_binom(ni, ki, p) % p
    return result


@lru_cache(maxsize=None)
def _small_binom(n: int, k: int, p: int) -> int:
    num = den = 1
    for i in range(k):
        num = num * (n - i) % p
        den = den * (i + 1) % p
    return num * pow(den, p - 2, p) % p


def has_carry(x: int, y: int, p: int) -> bool:
    """True when adding ``x`` and ``y`` in base ``p`` produces a carry."""
    if x < 0 or y < 0:
        raise ValueError("arguments must be non-negative")
    _check_bound(x, y, x + y)
    while x and y:
        x, xi = divmod(x, p)
        y, yi = divmod(y, p)
        if xi + yi >= p:
            return True
    return False


def carry_count(x: int, y: int, p: int) -> int:
    """Number of carries when adding ``x`` and ``y`` in base ``p``."""
    carries = c = 0
    while x or y or c:
        x, xi = divmod(x, p)
        y, yi = divmod(y, p)
        c = 1 if xi + yi + c >= p else 0
        carries += c
    return carries


__all__ = [
    "FieldCtx",
    "FieldElem",
    "field_create",
    "field_from_q",
    "canonical_modulus",
    "is_irreducible",
    "is_prime",
    "base_p_digits",
    "lucas_binom",
    "has_carry",
    "carry_count",
]
