"""Built-in consistency suites behind ``mzv selftest``."""
from __future__ import annotations

import tempfile
import time

from .ffield import FieldCtx
from .hg import HGCache, compute_G, compute_H
from .polyrat import RatFunc, bipoly_eval_T
from .powersums import ell, power_sum, power_sum_less, power_sum_oracle

FIELDS = ((2, 1), (3, 1), (2, 2), (5, 1))
EXAMPLE = ((3, 4), (2, 8), (1, 12), (4, 20), (3, 24), (2, 28))


def _oracle(quick: bool) -> bool:
    kmax = 12 if quick else 40
    for p, n in FIELDS:
        ctx = FieldCtx(p, n)
        for d in range(3):
            for k in range(1, kmax + 1):
                if power_sum(ctx, d, k) != power_sum_oracle(ctx, d, k):
                    return False
    return True


def _frobenius(quick: bool) -> bool:
    for p, n in FIELDS:
        ctx = FieldCtx(p, n)
        dmax = 3 if (quick or ctx.q == 5) else 4
        for d in range(dmax + 1):
            for s in range(1, 11):
                if power_sum(ctx, d, p * s) != power_sum(ctx, d, s).frobenius(1):
                    return False
    return True


def _reciprocal_ell(quick: bool) -> bool:
    for p, n in FIELDS:
        ctx = FieldCtx(p, n)
        for d in range(4 if quick else 6):
            if power_sum(ctx, d, 1) != RatFunc(ell(ctx, d)).inverse():
                return False
    return True


def _hg(quick: bool, cache: HGCache) -> bool:
    kmax = 10 if quick else 25
    for p, n in FIELDS:
        ctx = FieldCtx(p, n)
        for k in range(1, kmax + 1):
            lk = RatFunc(ell(ctx, 2)) ** k
            if bipoly_eval_T(compute_H(ctx, k, cache), 2) != lk * power_sum(ctx, 2, k):
                return False
            if k % (ctx.q - 1) == 0:
                if bipoly_eval_T(compute_G(ctx, k, cache), 2) != lk * power_sum_less(ctx, 2, k):
                    return False
    return True


def _example(cache: HGCache) -> bool:
    from .prover import prove_identity
    from .solver import solve_shuffle

    s = solve_shuffle(FieldCtx(5), 2, 30, cache=cache)
    return set(s.pairs) == set(EXAMPLE) and prove_identity(s, cache=cache).proved


def run_selftest(cache_dir: str | None = None, quick: bool = False, out=print) -> bool:
    with tempfile.TemporaryDirectory() as tmp:
        cache = HGCache(cache_dir or tmp)
        suites = [
            ("oracle equivalence", lambda: _oracle(quick)),
            ("Frobenius S_d(ps) = S_d(s)^p", lambda: _frobenius(quick)),
            ("S_d(1) = 1/ell_d", lambda: _reciprocal_ell(quick)),
            ("H/G evaluation", lambda: _hg(quick, cache)),
            ("S(2,30) over F_5 solved and proved", lambda: _example(cache)),
            ("cache reload matches", lambda: _hg(True, HGCache(cache_dir or tmp))),
        ]
        ok = True
        for name, fn in suites:
            start = time.perf_counter()
            try:
                passed = fn()
            except Exception as exc:  # report and continue with the other suites
                passed = False
                name = f"{name} ({type(exc).__name__}: {exc})"
            ok &= passed
            out(f"{'PASS' if passed else 'FAIL'}  {name}  [{time.perf_counter() - start:.1f}s]")
    return ok
