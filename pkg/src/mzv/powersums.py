"""Power sums over F_q[t] and the Carlitz quantities they are built from.

``S_d(k)`` is the sum of ``a^-k`` over monic ``a`` of degree ``d``.  The monic
polynomials of degree ``d`` are exactly the roots of

    P_d(x) = e_d(x) - D_d,

where ``e_d`` is the Carlitz polynomial (the F_q-linear polynomial vanishing
on all ``a`` of degree ``< d``).  Hence ``sum 1/(x - a) = P_d'/P_d`` and

    S_d(k) = -[x^(k-1)] P_d'(x) / P_d(x).

Only the ``x^1`` term of ``e_d`` survives differentiation, so ``P_d'`` is a
constant and the whole computation is one inversion of a sparse power series.
A brute-force enumeration over all ``q^d`` monics is kept as an independent
oracle.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

from .errors import ExponentOverflow, InvalidIndex, TooLarge
from .ffield import FieldCtx
from .polyrat import (
    MAX_DEGREE,
    Poly,
    RatFunc,
    Series,
    f_frobenius,
    f_one,
    f_t,
    rat_from_int,
    series_inverse,
)

ORACLE_LIMIT = 10**5


@dataclass
class CarlitzCache:
    """Append-only memo of Carlitz data for one field."""

    ctx: FieldCtx
    brackets: dict = field(default_factory=dict)
    D: list = field(default_factory=list)
    L: list = field(default_factory=list)
    e: list = field(default_factory=list)  # e[d][i] = coefficient of x^(q^i)
    inv_series: dict = field(default_factory=dict)  # d -> Series of 1/P_d
    scaled: dict = field(default_factory=dict)  # (d, k) -> ell_d^k S_d(k)
    lock: threading.RLock = field(default_factory=threading.RLock)

    def bracket(self, n: int):
        """``[n] = t^(q^n) - t`` as a flint polynomial."""
        with self.lock:
            if n not in self.brackets:
                qn = self.ctx.q**n
                if qn > MAX_DEGREE:
                    raise ExponentOverflow(f"q^{n} exceeds the dense bound")
                t = f_t(self.ctx)
                self.brackets[n] = t.left_shift(qn - 1) - t
            return self.brackets[n]

    def D_n(self, n: int):
        with self.lock:
            if not self.D:
                self.D.append(f_one(self.ctx))
            while len(self.D) <= n:
                m = len(self.D)
                self.D.append(self.bracket(m) * self.D[m - 1] ** self.ctx.q)
            return self.D[n]

    def L_n(self, n: int):
        with self.lock:
            if not self.L:
                self.L.append(f_one(self.ctx))
            while len(self.L) <= n:
                m = len(self.L)
                self.L.append(self.bracket(m) * self.L[m - 1])
            return self.L[n]

    def ell_n(self, n: int):
        return self.L_n(n) if n % 2 == 0 else -self.L_n(n)

    def carlitz(self, d: int) -> list:
        """Coefficients of ``e_d(x) = sum_i c_i x^(q^i)``, ``i = 0..d``.

        Built from ``e_0 = x`` and ``e_{d+1} = e_d^q - D_d^(q-1) e_d``.
        """
        with self.lock:
            if not self.e:
                self.e.append([f_one(self.ctx)])
            q = self.ctx.q
            while len(self.e) <= d:
                m = len(self.e) - 1
                prev = self.e[m]
                mult = self.D_n(m) ** (q - 1)
                nxt = [-(prev[0] * mult)]
                for i in range(1, m + 2):
                    frob = f_frobenius(self.ctx, prev[i - 1], self.ctx.n)
                    lower = prev[i] * mult if i <= m else 0
                    nxt.append(frob - lower)
                self.e.append(nxt)
            return self.e[d]


_caches: dict = {}
_caches_lock = threading.Lock()


def carlitz_cache(ctx: FieldCtx) -> CarlitzCache:
    with _caches_lock:
        if ctx not in _caches:
            _caches[ctx] = CarlitzCache(ctx)
        return _caches[ctx]


def special_polys(ctx: FieldCtx, n: int):
    """``([n], D_n, L_n, ell_n)`` as :class:`Poly`; ``[0]`` is reported as None."""
    c = carlitz_cache(ctx)
    br = None if n == 0 else Poly(ctx, c.bracket(n))
    return br, Poly(ctx, c.D_n(n)), Poly(ctx, c.L_n(n)), Poly(ctx, c.ell_n(n))


def ell(ctx: FieldCtx, n: int) -> Poly:
    return Poly(ctx, carlitz_cache(ctx).ell_n(n))


def carlitz_eval(ctx: FieldCtx, d: int, x: Poly) -> Poly:
    """Evaluate ``e_d`` at a polynomial ``x``."""
    coeffs = carlitz_cache(ctx).carlitz(d)
    acc = ctx.flint_poly(0)
    xp = x._f
    for i, c in enumerate(coeffs):
        if i:
            xp = f_frobenius(ctx, xp, ctx.n)
        acc += c * xp
    return Poly(ctx, acc)


def root_polynomial(ctx: FieldCtx, d: int) -> dict[int, Poly]:
    """``P_d(x) = e_d(x) - D_d`` as a sparse map ``x-exponent -> coefficient``."""
    c = carlitz_cache(ctx)
    coeffs = c.carlitz(d)
    out = {0: Poly(ctx, -c.D_n(d))}
    for i, v in enumerate(coeffs):
        out[ctx.q**i] = Poly(ctx, v)
    return out


def _scaled_inverse_series(ctx: FieldCtx, d: int, order: int) -> Series:
    """Series of ``-D_d / P_d(ell_d y)``, i.e. ``1/(1 - E(ell_d y))``.

    Writing ``P_d(x) = -D_d (1 - E(x))`` with ``E`` supported on powers of q,
    the rescaling ``x = ell_d y`` turns the coefficients ``c_i ell_d^(q^i)/D_d``
    into fractions with tiny denominators (products of ``D_i`` for
    ``q^i < order``), so the recurrence never manipulates the huge powers of
    ``ell_d`` that appear in the unscaled expansion.
    """
    cache = carlitz_cache(ctx)
    with cache.lock:
        have = cache.inv_series.get(d)
        if have is not None and have.order >= order:
            return have
    if have is not None:
        order = max(order, 2 * have.order)
    q = ctx.q
    coeffs = cache.carlitz(d)
    Dd, ld = cache.D_n(d), cache.ell_n(d)
    terms = {0: rat_from_int(ctx, 1)}
    for i, c in enumerate(coeffs):
        e = q**i
        if e >= order:
            break
        terms[e] = RatFunc.from_flint(ctx, -(c * ld**e), Dd)
    inv = series_inverse(Series.from_sparse(ctx, terms, order))
    with cache.lock:
        cur = cache.inv_series.get(d)
        if cur is None or cur.order < inv.order:
            cache.inv_series[d] = inv
        return cache.inv_series[d]


def power_sum(ctx: FieldCtx, d: int, k: int) -> RatFunc:
    """``S_d(k)``, the sum of ``a^-k`` over monic ``a`` of degree ``d``.

    ``-[x^(k-1)] P_d'/P_d`` with ``P_d' = c_0`` and ``1/P_d(x) = -D_d^-1 u(x/ell_d)``
    gives ``S_d(k) = c_0 u_{k-1} / (D_d ell_d^(k-1))``.
    """
    if k <= 0:
        raise InvalidIndex(f"power sums need k >= 1, got {k}")
    if d < 0:
        raise InvalidIndex("degree must be non-negative")
    if d == 0:
        return rat_from_int(ctx, 1)
    cache = carlitz_cache(ctx)
    u = _scaled_inverse_series(ctx, d, k).coeffs[k - 1]
    c0 = cache.carlitz(d)[0]
    den = cache.D_n(d) * cache.ell_n(d) ** (k - 1)
    return RatFunc.from_flint(ctx, c0 * u.num._f, den * u.den._f)


def power_sum_scaled(ctx: FieldCtx, d: int, k: int):
    """``ell_d^k S_d(k)`` as a flint polynomial (it has no denominator)."""
    if k <= 0:
        raise InvalidIndex(f"power sums need k >= 1, got {k}")
    cache = carlitz_cache(ctx)
    key = (d, k)
    out = cache.scaled.get(key)
    if out is None:
        if d == 0:
            out = f_one(ctx)
        else:
            u = _scaled_inverse_series(ctx, d, k).coeffs[k - 1]
            num = cache.carlitz(d)[0] * u.num._f * cache.ell_n(d)
            out = num.exact_division(cache.D_n(d) * u.den._f)
        cache.scaled[key] = out
    return out


def power_sum_less_scaled(ctx: FieldCtx, d: int, k: int):
    """``ell_d^k S_{<d}(k)`` as a flint polynomial."""
    cache = carlitz_cache(ctx)
    ld = cache.ell_n(d)
    acc = ctx.flint_poly(0)
    for e in range(d):
        acc += ld.exact_division(cache.ell_n(e)) ** k * power_sum_scaled(ctx, e, k)
    return acc


def delta_scaled(ctx: FieldCtx, d: int, a: int, b: int):
    """``ell_d^(a+b) Delta_d(a, b)``."""
    return power_sum_scaled(ctx, d, a) * power_sum_scaled(ctx, d, b) - power_sum_scaled(ctx, d, a + b)


def monics(ctx: FieldCtx, d: int):
    """All monic polynomials of degree ``d`` (flint objects)."""
    els = [ctx.flint(list(e.coords)) for e in ctx.elements()]
    one = ctx.flint(1)
    for tail in itertools.product(els, repeat=d):
        yield ctx.flint_poly(list(tail) + [one])


def _sum_fractions(items):
    """Pairwise (balanced) sum of ``(num, den)`` flint fractions."""
    items = list(items)
    while len(items) > 1:
        nxt = []
        for i in range(0, len(items) - 1, 2):
            (a, b), (c, d) = items[i], items[i + 1]
            nxt.append((a * d + c * b, b * d))
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def power_sum_oracle(ctx: FieldCtx, d: int, k: int) -> RatFunc:
    """``S_d(k)`` by literal summation over all monics of degree ``d``."""
    if k <= 0:
        raise InvalidIndex(f"power sums need k >= 1, got {k}")
    if ctx.q**d > ORACLE_LIMIT:
        raise TooLarge(f"enumerating q^d = {ctx.q ** d} monics exceeds {ORACLE_LIMIT}")
    one = f_one(ctx)
    n, den = _sum_fractions((one, a**k) for a in monics(ctx, d))
    return RatFunc.from_flint(ctx, n, den)


def power_sum_less(ctx: FieldCtx, d: int, k: int) -> RatFunc:
    """``S_{<d}(k) = sum_{e<d} S_e(k)``."""
    acc = rat_from_int(ctx, 0)
    for e in range(d):
        acc = acc + power_sum(ctx, e, k)
    return acc


def power_sum_double(ctx: FieldCtx, d: int, s1: int, s2: int) -> RatFunc:
    """``S_d(s1, s2) = S_d(s1) * S_{<d}(s2)``."""
    if s1 <= 0 or s2 <= 0:
        raise InvalidIndex("indices must be positive")
    if d == 0:
        return rat_from_int(ctx, 0)
    return power_sum(ctx, d, s1) * power_sum_less(ctx, d, s2)


def power_sum_double_oracle(ctx: FieldCtx, d: int, s1: int, s2: int) -> RatFunc:
    """Nested enumeration over pairs ``deg a1 = d > deg a2``."""
    one = f_one(ctx)
    items = []
    for a1 in monics(ctx, d):
        for d2 in range(d):
            for a2 in monics(ctx, d2):
                items.append((one, a1**s1 * a2**s2))
    if not items:
        return rat_from_int(ctx, 0)
    n, den = _sum_fractions(items)
    return RatFunc.from_flint(ctx, n, den)


def delta(ctx: FieldCtx, d: int, a: int, b: int) -> RatFunc:
    """``Delta_d(a, b) = S_d(a) S_d(b) - S_d(a + b)``."""
    return power_sum(ctx, d, a) * power_sum(ctx, d, b) - power_sum(ctx, d, a + b)


def zeta_trunc(ctx: FieldCtx, s, D: int) -> RatFunc:
    """Multizeta value truncated to ``d_1 <= D`` (depth at most 4)."""
    s = tuple(s)
    if not 1 <= len(s) <= 4:
        raise InvalidIndex("depth must be between 1 and 4")
    if any(x <= 0 for x in s):
        raise InvalidIndex("indices must be positive")
    acc = rat_from_int(ctx, 0)
    for degs in itertools.combinations(range(D, -1, -1), len(s)):
        term = rat_from_int(ctx, 1)
        for di, si in zip(degs, s):
            term = term * power_sum(ctx, di, si)
        acc = acc + term
    return acc


def closed_form_Sd(ctx: FieldCtx, m: int, i: int, d: int):
    """Compare ``S_d(m q^i - 1)`` with ``ell_{d+i} / (ell_i ell_d^(m q^i))``.

    Returns ``(equal, lhs, rhs)``.
    """
    q = ctx.q
    if not 2 <= m <= q:
        raise InvalidIndex("need 2 <= m <= q")
    k = m * q**i - 1
    lhs = power_sum(ctx, d, k)
    rhs = RatFunc(ell(ctx, d + i)) / (RatFunc(ell(ctx, i)) * RatFunc(ell(ctx, d)) ** (m * q**i))
    return lhs == rhs, lhs, rhs
