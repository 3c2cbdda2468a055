"""Exact arithmetic in F_q[t], F_q(t), truncated series over F_q(t), and F_q(t)[T].

All heavy lifting is delegated to python-flint's ``fq_default_poly``.  The
classes here are thin immutable wrappers that fix a canonical form and a text
serialization:

* ``Poly``      -- ``"3*t^2+1"``; extension-field coefficients are written in
                   the generator ``z`` of the field modulus, e.g. ``"(z+1)*t"``.
* ``RatFunc``   -- ``"(num)/(den)"`` with ``den`` monic and coprime to ``num``.
* ``BiPoly``    -- a common-denominator form: a monic ``den(t)`` together with
                   numerators ``num_e(t)`` for each power ``T^e``; the gcd of
                   ``den`` and all numerators is 1, which makes the
                   representation canonical.

Dense storage in flint replaces the sparse term lists one would write in pure
Python: the exponents involved stay below ``MAX_DEGREE``.
"""
from __future__ import annotations

import re
from typing import Iterable, Sequence

from .errors import ExponentOverflow, NonUnitConstantTerm, ZeroDenominator
from .ffield import FieldCtx, FieldElem

FORMAT_VERSION = 1
MAX_DEGREE = 2**26


def _check_degree(n: int) -> None:
    if n > MAX_DEGREE:
        raise ExponentOverflow(f"degree {n} exceeds the dense bound {MAX_DEGREE}")


# ---------------------------------------------------------------------------
# raw flint helpers (used directly by the inner loops of other modules)

def f_zero(ctx: FieldCtx):
    return ctx.flint_poly(0)


def f_one(ctx: FieldCtx):
    return ctx.flint_poly(1)


def f_t(ctx: FieldCtx):
    return ctx.flint_poly([0, 1])


def f_monomial(ctx: FieldCtx, e: int, c=1):
    _check_degree(e)
    return ctx.flint_poly([c]).left_shift(e)


def f_frobenius(ctx: FieldCtx, f, k: int = 1):
    """``f ** (p**k)`` computed as coefficient Frobenius plus inflation."""
    if f.is_zero():
        return f
    pk = ctx.p**k
    _check_degree(f.degree() * pk)
    if ctx.n == 1:
        return f.inflate(pk)
    coeffs = [c.frobenius(k) for c in f.coeffs()]
    return ctx.flint_poly(coeffs).inflate(pk)


def f_coeff_ints(ctx: FieldCtx, f) -> list[list[int]]:
    """Coordinates of the coefficients of ``f`` (constant first)."""
    n = ctx.n
    out = []
    for c in f.coeffs():
        v = [int(x) for x in c.to_list()]
        v += [0] * (n - len(v))
        out.append(v[:n])
    return out


# ---------------------------------------------------------------------------
# text format

def _elem_str(ctx: FieldCtx, c) -> str:
    if ctx.n == 1:
        return str(int(c.to_list()[0]) if c.to_list() else 0)
    coords = [int(x) for x in c.to_list()]
    parts = []
    for i in range(len(coords) - 1, -1, -1):
        v = coords[i]
        if not v:
            continue
        if i == 0:
            parts.append(str(v))
        else:
            mono = "z" if i == 1 else f"z^{i}"
            parts.append(mono if v == 1 else f"{v}*{mono}")
    return "+".join(parts) or "0"


def _flint_to_str(ctx: FieldCtx, f, var: str = "t") -> str:
    if f.is_zero():
        return "0"
    parts = []
    coeffs = f.coeffs()
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c.is_zero():
            continue
        cs = _elem_str(ctx, c)
        if ctx.n > 1 and not re.fullmatch(r"\d+", cs):
            cs = f"({cs})"
        if e == 0:
            parts.append(cs)
            continue
        mono = var if e == 1 else f"{var}^{e}"
        parts.append(mono if cs == "1" else f"{cs}*{mono}")
    return "+".join(parts)


def _split_top(s: str, sep: str = "+") -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def _parse_elem(ctx: FieldCtx, s: str):
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    coords = [0] * ctx.n
    for term in s.split("+"):
        term = term.strip()
        m = re.fullmatch(r"(?:(\d+)\*?)?(z(?:\^(\d+))?)?", term)
        if not term or not m:
            raise ValueError(f"cannot parse field element {s!r}")
        c = int(m.group(1)) if m.group(1) else 1
        e = (int(m.group(3)) if m.group(3) else 1) if m.group(2) else 0
        if e >= ctx.n:
            raise ValueError(f"power z^{e} outside the power basis")
        coords[e] = (coords[e] + c) % ctx.p
    return ctx.flint(coords)


def _parse_flint(ctx: FieldCtx, s: str, var: str = "t"):
    s = s.replace(" ", "")
    if s in ("", "0"):
        return ctx.flint_poly(0)
    acc = {}
    for term in _split_top(s):
        if not term:
            raise ValueError(f"empty term in {s!r}")
        coef_s, mono = term, None
        if var in term:
            idx = term.rfind(var)
            mono = term[idx:]
            coef_s = term[:idx].rstrip("*")
        m = re.fullmatch(rf"{var}(?:\^(\d+))?", mono) if mono else None
        if mono and not m:
            raise ValueError(f"cannot parse term {term!r}")
        e = (int(m.group(1)) if m.group(1) else 1) if m else 0
        c = _parse_elem(ctx, coef_s) if coef_s else ctx.flint(1)
        acc[e] = acc.get(e, ctx.flint(0)) + c
    top = max(acc)
    _check_degree(top)
    coeffs = [acc.get(e, ctx.flint(0)) for e in range(top + 1)]
    return ctx.flint_poly(coeffs)


# ---------------------------------------------------------------------------

class Poly:
    """Polynomial in ``t`` over F_q."""

    __slots__ = ("ctx", "_f")

    def __init__(self, ctx: FieldCtx, f=None):
        self.ctx = ctx
        self._f = ctx.flint_poly(0) if f is None else f

    @classmethod
    def from_terms(cls, ctx: FieldCtx, terms: Iterable[tuple[int, FieldElem | int]]) -> Poly:
        acc = ctx.flint_poly(0)
        for e, c in terms:
            c = ctx(c) if not isinstance(c, FieldElem) else c
            acc += f_monomial(ctx, e, ctx.to_flint(c))
        return cls(ctx, acc)

    @classmethod
    def from_coeffs(cls, ctx: FieldCtx, coeffs: Sequence) -> Poly:
        vals = [ctx.to_flint(ctx(c)) for c in coeffs]
        return cls(ctx, ctx.flint_poly(vals))

    @classmethod
    def t(cls, ctx: FieldCtx) -> Poly:
        return cls(ctx, f_t(ctx))

    @classmethod
    def parse(cls, ctx: FieldCtx, s: str) -> Poly:
        return cls(ctx, _parse_flint(ctx, s))

    # structure
    def terms(self) -> list[tuple[int, FieldElem]]:
        """Sparse view: ``(exponent, coefficient)`` pairs, exponents increasing."""
        out = []
        for e, c in enumerate(self._f.coeffs()):
            if not c.is_zero():
                out.append((e, self.ctx.from_flint(c)))
        return out

    def degree(self) -> int:
        return self._f.degree()

    def is_zero(self) -> bool:
        return self._f.is_zero()

    def is_one(self) -> bool:
        return self._f.is_one()

    def leading_coefficient(self) -> FieldElem:
        return self.ctx.from_flint(self._f.leading_coefficient())

    def monic(self) -> Poly:
        return Poly(self.ctx, self._f.monic())

    def __call__(self, x):
        if isinstance(x, Poly):
            return Poly(self.ctx, self._f.compose(x._f))
        return self.ctx.from_flint(self._f(self.ctx.to_flint(self.ctx(x))))

    # arithmetic
    def _lift(self, other):
        if isinstance(other, Poly):
            return other._f
        if isinstance(other, (int, FieldElem)):
            return self.ctx.flint_poly([self.ctx.to_flint(self.ctx(other))])
        return None

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else Poly(self.ctx, self._f + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else Poly(self.ctx, self._f - o)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else Poly(self.ctx, o - self._f)

    def __neg__(self):
        return Poly(self.ctx, -self._f)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self._f.is_zero() and not o.is_zero():
            _check_degree(self._f.degree() + o.degree())
        return Poly(self.ctx, self._f * o)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        if not self._f.is_zero():
            _check_degree(self._f.degree() * e)
        return Poly(self.ctx, self._f**e)

    def __divmod__(self, other):
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        qq, r = divmod(self._f, o)
        return Poly(self.ctx, qq), Poly(self.ctx, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        return RatFunc(self) / other

    def gcd(self, other: Poly) -> Poly:
        return Poly(self.ctx, self._f.gcd(other._f))

    def derivative(self) -> Poly:
        return Poly(self.ctx, self._f.derivative())

    def frobenius(self, k: int = 1) -> Poly:
        return Poly(self.ctx, f_frobenius(self.ctx, self._f, k))

    def __eq__(self, other):
        if isinstance(other, (int, FieldElem)):
            other = Poly(self.ctx, self._lift(other))
        if isinstance(other, RatFunc):
            return other == self
        return isinstance(other, Poly) and self.ctx == other.ctx and self._f == other._f

    def __hash__(self):
        return hash((self.ctx, str(self)))

    def __str__(self):
        return _flint_to_str(self.ctx, self._f)

    def __repr__(self):
        return f"Poly({self})"


class RatFunc:
    """Element of F_q(t) in lowest terms with monic denominator."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _normalized: bool = False):
        self.ctx = num.ctx
        if den is None:
            self.num, self.den = num, Poly(num.ctx, f_one(num.ctx))
            return
        if _normalized:
            self.num, self.den = num, den
            return
        n, d = _normalize_flint(num._f, den._f)
        self.num, self.den = Poly(self.ctx, n), Poly(self.ctx, d)

    @classmethod
    def from_flint(cls, ctx: FieldCtx, n, d=None) -> RatFunc:
        if d is None:
            return cls(Poly(ctx, n))
        n, d = _normalize_flint(n, d)
        return cls(Poly(ctx, n), Poly(ctx, d), _normalized=True)

    @classmethod
    def parse(cls, ctx: FieldCtx, s: str) -> RatFunc:
        s = s.replace(" ", "")
        parts = _split_top(s, "/")
        if len(parts) == 1:
            return cls(Poly.parse(ctx, _strip_parens(parts[0])))
        if len(parts) != 2:
            raise ValueError(f"cannot parse rational function {s!r}")
        return cls(Poly.parse(ctx, _strip_parens(parts[0])), Poly.parse(ctx, _strip_parens(parts[1])))

    def _lift(self, other) -> RatFunc | None:
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, (int, FieldElem)):
            return RatFunc(Poly(self.ctx, self.ctx.flint_poly([self.ctx.to_flint(self.ctx(other))])))
        return None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den._f == o.den._f:
            n, d = self.num._f + o.num._f, self.den._f
        else:
            n = self.num._f * o.den._f + o.num._f * self.den._f
            d = self.den._f * o.den._f
        return RatFunc.from_flint(self.ctx, n, d)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return RatFunc.from_flint(self.ctx, self.num._f * o.num._f, self.den._f * o.den._f)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if self.is_zero():
            raise ZeroDenominator("inverse of zero rational function")
        return RatFunc.from_flint(self.ctx, self.den._f, self.num._f)

    def __truediv__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num**e, self.den**e, _normalized=True)

    def frobenius(self, k: int = 1) -> RatFunc:
        return RatFunc(self.num.frobenius(k), self.den.frobenius(k), _normalized=True)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num._f == o.num._f and self.den._f == o.den._f

    def __hash__(self):
        return hash((self.ctx, str(self)))

    def __str__(self):
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc{self}"


def _strip_parens(s: str) -> str:
    if not (s.startswith("(") and s.endswith(")")):
        return s
    depth = 0
    for i, ch in enumerate(s):
        depth += (ch == "(") - (ch == ")")
        if depth == 0 and i < len(s) - 1:
            return s
    return s[1:-1]


def _normalize_flint(n, d):
    if d.is_zero():
        raise ZeroDenominator("zero denominator")
    if n.is_zero():
        return n, _unit_like(d)
    g = n.gcd(d)
    if not g.is_one():
        n = n.exact_division(g)
        d = d.exact_division(g)
    lc = d.leading_coefficient()
    if not lc.is_one():
        inv = lc.inverse()
        n, d = n * inv, d * inv
    return n, d


def _unit_like(d):
    return d * 0 + 1


def rat_normalize(num: Poly, den: Poly) -> RatFunc:
    """Reduced form with monic denominator."""
    return RatFunc(num, den)


def rat_from_int(ctx: FieldCtx, c: int) -> RatFunc:
    return RatFunc(Poly(ctx, ctx.flint_poly([c])))


# ---------------------------------------------------------------------------

class Series:
    """Power series ``c_0 + c_1 y + ... + c_{w-1} y^{w-1}`` with RatFunc coefficients."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Sequence[RatFunc]):
        self.ctx = ctx
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_sparse(cls, ctx: FieldCtx, terms: dict[int, RatFunc], order: int) -> Series:
        zero = rat_from_int(ctx, 0)
        return cls(ctx, [terms.get(i, zero) for i in range(order)])

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __mul__(self, other: Series) -> Series:
        w = min(self.order, other.order)
        zero = rat_from_int(self.ctx, 0)
        a = [(i, c) for i, c in enumerate(self.coeffs[:w]) if not c.is_zero()]
        b = [(i, c) for i, c in enumerate(other.coeffs[:w]) if not c.is_zero()]
        out = [zero] * w
        for i, x in a:
            for j, y in b:
                if i + j < w:
                    out[i + j] = out[i + j] + x * y
        return Series(self.ctx, out)

    def __eq__(self, other):
        return isinstance(other, Series) and self.coeffs == other.coeffs

    def __repr__(self):
        return "Series(" + " + ".join(f"[{c}]y^{i}" for i, c in enumerate(self.coeffs)) + ")"


def series_inverse(s: Series) -> Series:
    """Multiplicative inverse up to the truncation order of ``s``.

    Uses the triangular recurrence ``u_m = -c_0^{-1} sum_{i>=1} c_i u_{m-i}``,
    skipping zero coefficients, so sparse inputs (like the Carlitz series,
    supported on powers of q) stay cheap.
    """
    if s.order == 0:
        return s
    c0 = s.coeffs[0]
    if c0.is_zero():
        raise NonUnitConstantTerm("constant term is not invertible")
    inv0 = c0.inverse()
    support = [(i, c) for i, c in enumerate(s.coeffs) if i and not c.is_zero()]
    u = [inv0]
    zero = rat_from_int(s.ctx, 0)
    for m in range(1, s.order):
        acc = zero
        for i, c in support:
            if i > m:
                break
            acc = acc + c * u[m - i]
        u.append(-(acc * inv0))
    return Series(s.ctx, u)


# ---------------------------------------------------------------------------

class BiPoly:
    """Polynomial in ``T`` with coefficients in F_q(t).

    Stored as ``sum_e num[e](t) T^e / den(t)`` in canonical common-denominator
    form (see module docstring).  ``num`` maps exponents to nonzero flint
    polynomials.
    """

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: FieldCtx, num: dict, den=None, _normalized: bool = False):
        self.ctx = ctx
        num = {e: c for e, c in num.items() if not c.is_zero()}
        den = f_one(ctx) if den is None else den
        if den.is_zero():
            raise ZeroDenominator("BiPoly denominator is zero")
        if not _normalized:
            num, den = _normalize_common(num, den)
        self.num = num
        self.den = den

    # constructors
    @classmethod
    def zero(cls, ctx: FieldCtx) -> BiPoly:
        return cls(ctx, {}, _normalized=True)

    @classmethod
    def constant(cls, ctx: FieldCtx, c) -> BiPoly:
        if isinstance(c, RatFunc):
            return cls(ctx, {0: c.num._f}, c.den._f, _normalized=True)
        return cls(ctx, {0: ctx.flint_poly([c])})

    @classmethod
    def T(cls, ctx: FieldCtx) -> BiPoly:
        return cls(ctx, {1: f_one(ctx)}, _normalized=True)

    @classmethod
    def from_terms(cls, ctx: FieldCtx, terms: Iterable[tuple[int, RatFunc]]) -> BiPoly:
        acc = cls.zero(ctx)
        for e, c in terms:
            acc = acc + cls(ctx, {e: c.num._f}, c.den._f, _normalized=True)
        return acc

    # structure
    def terms(self) -> list[tuple[int, RatFunc]]:
        """Sparse view: ``(T-exponent, coefficient)`` with increasing exponents."""
        return [(e, RatFunc.from_flint(self.ctx, self.num[e], self.den)) for e in sorted(self.num)]

    def coefficient(self, e: int) -> RatFunc:
        n = self.num.get(e)
        if n is None:
            return rat_from_int(self.ctx, 0)
        return RatFunc.from_flint(self.ctx, n, self.den)

    def degree(self) -> int:
        return max(self.num) if self.num else -1

    def t_degree(self) -> int:
        return max((c.degree() for c in self.num.values()), default=-1)

    def is_zero(self) -> bool:
        return not self.num

    # arithmetic
    def _lift(self, other) -> BiPoly | None:
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (RatFunc,)):
            return BiPoly.constant(self.ctx, other)
        if isinstance(other, Poly):
            return BiPoly.constant(self.ctx, RatFunc(other))
        if isinstance(other, int):
            return BiPoly.constant(self.ctx, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return bipoly_lincomb(self.ctx, [(1, self), (1, o)])

    __radd__ = __add__

    def __neg__(self):
        return BiPoly(self.ctx, {e: -c for e, c in self.num.items()}, self.den, _normalized=True)

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        num = _mul_num(self.ctx, self.num, o.num)
        return BiPoly(self.ctx, num, self.den * o.den)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = BiPoly.constant(self.ctx, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c: RatFunc) -> BiPoly:
        num = {e: v * c.num._f for e, v in self.num.items()}
        return BiPoly(self.ctx, num, self.den * c.den._f)

    def inflate_T(self, k: int) -> BiPoly:
        """Substitute ``T -> T**k``."""
        return BiPoly(self.ctx, {e * k: c for e, c in self.num.items()}, self.den, _normalized=True)

    def evaluate(self, x: RatFunc) -> RatFunc:
        """Substitute ``T = x`` for an element of F_q(t)."""
        if not self.num:
            return rat_from_int(self.ctx, 0)
        u, v = x.num._f, x.den._f
        top = self.degree()
        acc = f_zero(self.ctx)
        for e in range(top, -1, -1):
            acc = acc * u
            c = self.num.get(e)
            if c is not None:
                acc = acc + c * v ** (top - e)
        return RatFunc.from_flint(self.ctx, acc, self.den * v**top)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.den == o.den and self.num == o.num

    def __hash__(self):
        return hash(serialize_bipoly(self))

    def __repr__(self):
        inner = " + ".join(f"[{c}]T^{e}" for e, c in self.terms())
        return f"BiPoly({inner or '0'})"


def _normalize_common(num: dict, den):
    if not num:
        return {}, _unit_like(den)
    g = den
    for c in num.values():
        if g.is_one():
            break
        g = g.gcd(c)
    if not g.is_one():
        num = {e: c.exact_division(g) for e, c in num.items()}
        den = den.exact_division(g)
    lc = den.leading_coefficient()
    if not lc.is_one():
        inv = lc.inverse()
        num = {e: c * inv for e, c in num.items()}
        den = den * inv
    return num, den


KRONECKER_MIN_TERMS = 24


def _mul_num(ctx: FieldCtx, a: dict, b: dict) -> dict:
    """Product of two numerator dictionaries (exponent -> flint poly)."""
    if not a or not b:
        return {}
    if len(a) * len(b) < KRONECKER_MIN_TERMS**2:
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = ea + eb
                v = ca * cb
                out[e] = out[e] + v if e in out else v
        return out
    # Kronecker substitution T -> t^stride packs both operands into one poly.
    stride = max(c.degree() for c in a.values()) + max(c.degree() for c in b.values()) + 1
    _check_degree(stride * (max(a) + max(b) + 1))
    pa = _pack(ctx, a, stride)
    pb = _pack(ctx, b, stride)
    return _unpack(pa * pb, stride, max(a) + max(b))


def _pack(ctx: FieldCtx, a: dict, stride: int):
    items = sorted(a.items())

    def build(lo, hi):
        if hi - lo == 1:
            e, c = items[lo]
            return c.left_shift(e * stride)
        mid = (lo + hi) // 2
        return build(lo, mid) + build(mid, hi)

    return build(0, len(items))


def _unpack(f, stride: int, top: int) -> dict:
    out = {}

    def split(g, lo, hi):
        # g holds T-exponents lo..hi-1 (already shifted down by lo*stride)
        if g.is_zero():
            return
        if hi - lo == 1:
            out[lo] = g
            return
        mid = (lo + hi) // 2
        cut = (mid - lo) * stride
        split(g.truncate(cut), lo, mid)
        split(g.right_shift(cut), mid, hi)

    split(f, 0, top + 1)
    return out


def bipoly_lincomb(ctx: FieldCtx, terms: Sequence[tuple[object, BiPoly]]) -> BiPoly:
    """``sum c_i * B_i`` for scalars ``c_i`` in F_q (ints or flint elements)."""
    terms = [(c, b) for c, b in terms if not b.is_zero()]
    if not terms:
        return BiPoly.zero(ctx)
    den = terms[0][1].den
    for _, b in terms[1:]:
        if b.den != den:
            g = den.gcd(b.den)
            den = den * b.den.exact_division(g)
    num: dict = {}
    for c, b in terms:
        mult = den.exact_division(b.den) * c
        for e, v in b.num.items():
            w = v * mult
            num[e] = num[e] + w if e in num else w
    return BiPoly(ctx, num, den)


def bipoly_eval_T(h: BiPoly, d: int) -> RatFunc:
    """Substitute ``T = t^(q^d)``."""
    ctx = h.ctx
    if not h.num:
        return rat_from_int(ctx, 0)
    step = ctx.q**d
    _check_degree(step * h.degree() + h.t_degree())
    acc = f_zero(ctx)
    for e, c in h.num.items():
        acc += c.left_shift(e * step)
    return RatFunc.from_flint(ctx, acc, h.den)


# ---------------------------------------------------------------------------
# serialization

def serialize_poly(f: Poly) -> str:
    return str(f)


def serialize_ratfunc(r: RatFunc) -> str:
    return str(r)


def serialize_bipoly(b: BiPoly) -> dict:
    ctx = b.ctx
    return {
        "format": FORMAT_VERSION,
        "den": _flint_to_str(ctx, b.den),
        "terms": [[e, _flint_to_str(ctx, b.num[e])] for e in sorted(b.num)],
    }


def deserialize_bipoly(ctx: FieldCtx, data: dict) -> BiPoly:
    if data.get("format") != FORMAT_VERSION:
        raise ValueError(f"unsupported BiPoly format {data.get('format')!r}")
    den = _parse_flint(ctx, data["den"])
    num = {int(e): _parse_flint(ctx, s) for e, s in data["terms"]}
    return BiPoly(ctx, num, den)
