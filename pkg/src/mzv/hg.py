"""The polynomials ``H_k(T)`` and ``G_k(T)`` in F_q(t)[T].

They are characterised by

    H_k(t^(q^d)) = ell_d^k S_d(k)        G_k(t^(q^d)) = ell_d^k S_{<d}(k)

for every ``d >= 0``, which turns a relation between power sums that must hold
for all ``d`` into a single identity in F_q(t)[T].

``H_k`` is the ``y^(k-1)`` coefficient of ``1/(1 - E(y))`` where

    E(y) = sum_i (-1)^i B_i(T)/D_i * y^(q^i),   B_i(T) = prod_{s=1..i} (T^(q^s) - t^(q^i)).

``G_k`` comes from the functional equation ``G(T^q) = (t - T^q)^k (G(T) + H(T))``.
Writing ``G = (t - T)^k rho / den(H)`` reduces it to

    rho(T^q) - (t - T)^k rho(T) = h(T),     h = numerator of H,

which determines the T-coefficients of ``rho`` one at a time from the bottom.
A polynomial solution exists only when the recurrence terminates; in practice
that happens exactly when ``k`` is a multiple of ``q - 1``.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidIndex, NoPolynomialSolution, VerificationFailed
from .ffield import FieldCtx, lucas_binom
from .polyrat import (
    BiPoly,
    RatFunc,
    _mul_num,
    bipoly_eval_T,
    deserialize_bipoly,
    f_monomial,
    f_one,
    serialize_bipoly,
)
from .powersums import carlitz_cache, power_sum, power_sum_less

log = logging.getLogger(__name__)

CHECK_DEGREES = (0, 1, 2, 3)
CACHE_ENV = "MZV_CACHE_DIR"


def h_degree_bound(q: int, k: int) -> int:
    return -(-k * q // (q - 1))


def g_degree_bound(q: int, k: int) -> int:
    return h_degree_bound(q, k) + q


# ---------------------------------------------------------------------------
# H


class _HSeries:
    """Coefficients ``u_m`` of ``1/(1 - E(y))`` kept over a lazy common denominator.

    ``u_m`` is stored as ``(num, ex)`` meaning ``num / prod_i D_i^ex[i]``, where
    ``num`` maps T-exponents to flint polynomials.
    """

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self.u = [({0: f_one(ctx)}, ())]
        self.B: list = []
        self.Dpow: dict = {}
        self.lock = threading.Lock()

    def _B(self, i: int) -> dict:
        ctx, q = self.ctx, self.ctx.q
        while len(self.B) <= i:
            j = len(self.B)
            c = -f_monomial(ctx, q**j)
            acc = {0: f_one(ctx)}
            for s in range(1, j + 1):
                acc = _mul_num(ctx, acc, {q**s: f_one(ctx), 0: c})
            self.B.append({e: v for e, v in acc.items() if not v.is_zero()})
        return self.B[i]

    def _D(self, i: int, e: int):
        key = (i, e)
        if key not in self.Dpow:
            self.Dpow[key] = carlitz_cache(self.ctx).D_n(i) ** e
        return self.Dpow[key]

    def get(self, m: int):
        with self.lock:
            q = self.ctx.q
            while len(self.u) <= m:
                n = len(self.u)
                parts = []
                i = 0
                while q**i <= n:
                    num, ex = self.u[n - q**i]
                    ex = list(ex) + [0] * (i + 1 - len(ex))
                    ex[i] += 1
                    prod = _mul_num(self.ctx, num, self._B(i))
                    if i % 2:
                        prod = {e: -v for e, v in prod.items()}
                    parts.append((prod, ex))
                    i += 1
                width = max(len(ex) for _, ex in parts)
                top = [max((ex[j] if j < len(ex) else 0) for _, ex in parts) for j in range(width)]
                total: dict = {}
                for num, ex in parts:
                    mult = f_one(self.ctx)
                    for j in range(width):
                        gap = top[j] - (ex[j] if j < len(ex) else 0)
                        if gap:
                            mult = mult * self._D(j, gap)
                    for e, v in num.items():
                        w = v * mult if not mult.is_one() else v
                        total[e] = total[e] + w if e in total else w
                total = {e: v for e, v in total.items() if not v.is_zero()}
                self.u.append((total, tuple(top)))
            return self.u[m]


_h_series: dict = {}
_h_series_lock = threading.Lock()


def _series_for(ctx: FieldCtx) -> _HSeries:
    with _h_series_lock:
        if ctx not in _h_series:
            _h_series[ctx] = _HSeries(ctx)
        return _h_series[ctx]


def _raw_H(ctx: FieldCtx, k: int) -> BiPoly:
    s = _series_for(ctx)
    num, ex = s.get(k - 1)
    den = f_one(ctx)
    for i, e in enumerate(ex):
        if e:
            den = den * s._D(i, e)
    return BiPoly(ctx, dict(num), den)


# ---------------------------------------------------------------------------
# G


def _raw_G(ctx: FieldCtx, k: int, H: BiPoly, cap: int | None = None) -> BiPoly:
    """Solve the ``rho`` recurrence; raise NoPolynomialSolution past the cap.

    Each ``rho_N`` is ``sigma_N / (t^e_N (1 - t^k))`` with ``sigma_N`` a
    polynomial, so the recurrence needs only shifts, never a general gcd.
    """
    q, p = ctx.q, ctx.p
    h = H.num
    deg_h = max(h) if h else -1
    if cap is None:
        cap = g_degree_bound(q, k)
    # binomial support of (t - T)^k, sparse by Lucas
    binoms = [(m, lucas_binom(k, m, p)) for m in range(1, k + 1)]
    binoms = [(m, c if m % 2 == 0 else (-c) % p) for m, c in binoms if c]
    one = f_one(ctx)
    tk = f_monomial(ctx, k)
    base_den = one - tk  # rho_0 = h_0 / (1 - t^k)
    sigma: list = []
    val: list = []  # t-adic shift e_N
    last = -1
    N = 0
    while True:
        if N > deg_h and N > q * max(last, 0) + k:
            break
        if last > cap - k:
            raise NoPolynomialSolution(
                f"G_{k} over F_{q}: no polynomial solution with deg_T <= {cap}"
            )
        if N == 0:
            # rho_0 - t^k rho_0 = h_0
            h0 = h.get(0)
            sigma.append(None if h0 is None else h0)
            val.append(0)
        else:
            # t^k rho_N = rho_{N/q} [q|N] - sum_m C(k,m) (-1)^m t^(k-m) rho_{N-m} - h_N
            parts = []
            hN = h.get(N)
            if hN is not None:
                parts.append((-(hN * base_den), 0))
            if N % q == 0 and sigma[N // q] is not None:
                parts.append((sigma[N // q], val[N // q]))
            for m, c in binoms:
                if m > N:
                    break
                s = sigma[N - m]
                if s is not None:
                    parts.append((-(s * c), val[N - m] - (k - m)))
            num, e = _combine(ctx, parts)
            sigma.append(num)
            val.append(e + k)
        if sigma[-1] is not None:
            last = N
        N += 1
    nz = [(n, sigma[n], val[n]) for n in range(len(sigma)) if sigma[n] is not None]
    if not nz:
        return BiPoly.zero(ctx)
    emax = max(0, max(e for _, _, e in nz))
    rho = {n: s.left_shift(emax - e) for n, s, e in nz}
    # (t - T)^k
    tpow = {0: f_monomial(ctx, k)}
    for m, c in binoms:
        tpow[m] = f_monomial(ctx, k - m, c)
    num = _mul_num(ctx, rho, tpow)
    den = H.den * base_den * f_monomial(ctx, emax)
    return BiPoly(ctx, num, den)


def _combine(ctx: FieldCtx, parts):
    """Sum of ``poly / t^e`` terms, returned as ``(sigma, e)`` with ``t`` stripped."""
    parts = [(s, e) for s, e in parts if s is not None and not s.is_zero()]
    if not parts:
        return None, 0
    emax = max(e for _, e in parts)
    acc = None
    for s, e in parts:
        term = s.left_shift(emax - e) if emax != e else s
        acc = term if acc is None else acc + term
    if acc.is_zero():
        return None, 0
    v = _t_valuation(acc)
    if v:
        acc = acc.right_shift(v)
    return acc, emax - v


def _t_valuation(f) -> int:
    i = 0
    while f[i].is_zero():
        i += 1
    return i


# ---------------------------------------------------------------------------
# verification and cache


def _check(ctx: FieldCtx, kind: str, k: int, poly: BiPoly, degrees=CHECK_DEGREES) -> int | None:
    """Return the first ``d`` where the defining property fails, else None."""
    ell = carlitz_cache(ctx).ell_n
    for d in degrees:
        lk = RatFunc.from_flint(ctx, ell(d) ** k)
        ps = power_sum(ctx, d, k) if kind == "H" else power_sum_less(ctx, d, k)
        if bipoly_eval_T(poly, d) != lk * ps:
            return d
    return None


def _checksum(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


@dataclass
class HGCache:
    """Memo of verified ``H_k``/``G_k``, optionally mirrored to a directory.

    Every entry passes the evaluation checks at ``d = 0..3`` before it is
    stored.  Files are re-verified at ``d = 1`` when loaded; a file that fails
    its checksum or the check is discarded and recomputed.
    """

    directory: str | os.PathLike | None = None
    memory: dict = field(default_factory=dict)
    bound_violations: list = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def _path(self, ctx: FieldCtx, kind: str, k: int) -> Path | None:
        if self.directory is None:
            return None
        mod = "".join(str(c) for c in ctx.modulus)
        sub = Path(self.directory) / f"q{ctx.q}_p{ctx.p}_n{ctx.n}_m{mod}"
        return sub / f"{kind}{k}.json"

    def _load(self, ctx: FieldCtx, kind: str, k: int) -> BiPoly | None:
        path = self._path(ctx, kind, k)
        if path is None or not path.exists():
            return None
        try:
            data = json.loads(path.read_text())
            body = data["bipoly"]
            if data.get("checksum") != _checksum(body):
                raise ValueError("checksum mismatch")
            poly = deserialize_bipoly(ctx, body)
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("discarding cache entry %s: %s", path, exc)
            return None
        if _check(ctx, kind, k, poly, degrees=(1,)) is not None:
            log.warning("discarding cache entry %s: fails re-verification", path)
            return None
        return poly

    def _store(self, ctx: FieldCtx, kind: str, k: int, poly: BiPoly) -> None:
        path = self._path(ctx, kind, k)
        if path is None:
            return
        body = serialize_bipoly(poly)
        data = {"kind": kind, "k": k, "p": ctx.p, "n": ctx.n,
                "modulus": list(ctx.modulus), "bipoly": body, "checksum": _checksum(body)}
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".tmp{os.getpid()}_{threading.get_ident()}")
        tmp.write_text(json.dumps(data, sort_keys=True))
        os.replace(tmp, path)

    def get(self, ctx: FieldCtx, kind: str, k: int) -> BiPoly:
        if k < 1:
            raise InvalidIndex(f"{kind}_k needs k >= 1, got {k}")
        key = (ctx, kind, k)
        hit = self.memory.get(key)
        if hit is not None:
            if isinstance(hit, NoPolynomialSolution):
                raise hit
            return hit
        poly = self._load(ctx, kind, k)
        if poly is None:
            try:
                poly = self._compute(ctx, kind, k)
            except NoPolynomialSolution as exc:
                with self.lock:
                    self.memory[key] = exc
                raise
            self._store(ctx, kind, k, poly)
        with self.lock:
            self.memory.setdefault(key, poly)
        return poly

    def _compute(self, ctx: FieldCtx, kind: str, k: int) -> BiPoly:
        q = ctx.q
        if kind == "H":
            poly = _raw_H(ctx, k)
            bound = h_degree_bound(q, k)
        else:
            H = self.get(ctx, "H", k)
            cap = g_degree_bound(q, k)
            try:
                poly = _raw_G(ctx, k, H, cap)
            except NoPolynomialSolution:
                poly = _raw_G(ctx, k, H, 2 * cap)
            bound = cap
        if poly.degree() > bound:
            msg = f"deg_T {kind}_{k} = {poly.degree()} exceeds {bound} over F_{q}"
            log.warning(msg)
            with self.lock:
                self.bound_violations.append(msg)
        bad = _check(ctx, kind, k, poly)
        if bad is not None:
            raise VerificationFailed(f"{kind}_{k} over F_{q} fails its defining property at d={bad}")
        return poly

    def clear(self) -> None:
        with self.lock:
            self.memory.clear()


_default: HGCache | None = None
_default_lock = threading.Lock()


def default_cache() -> HGCache:
    """Process-wide cache; mirrored to ``$MZV_CACHE_DIR`` when that is set."""
    global _default
    with _default_lock:
        if _default is None:
            _default = HGCache(os.environ.get(CACHE_ENV) or None)
        return _default


def set_default_cache(cache: HGCache) -> None:
    global _default
    with _default_lock:
        _default = cache


def compute_H(ctx: FieldCtx, k: int, cache: HGCache | None = None) -> BiPoly:
    """``H_k`` with ``H_k(t^(q^d)) = ell_d^k S_d(k)``, verified at ``d = 0..3``.

    >>> from mzv.ffield import FieldCtx
    >>> from mzv.polyrat import serialize_bipoly
    >>> serialize_bipoly(compute_H(FieldCtx(2), 3))["terms"]
    [[0, 't'], [2, '1']]
    """
    return (cache or default_cache()).get(ctx, "H", k)


def compute_G(ctx: FieldCtx, k: int, cache: HGCache | None = None) -> BiPoly:
    """``G_k`` with ``G_k(t^(q^d)) = ell_d^k S_{<d}(k)``, verified at ``d = 0..3``.

    Raises NoPolynomialSolution when no polynomial in ``T`` has this property,
    which is the case whenever ``q - 1`` does not divide ``k``.
    """
    return (cache or default_cache()).get(ctx, "G", k)
