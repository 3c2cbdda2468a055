"""Conjectural recipes predicting ``S(a, b)`` without solving anything.

Recursion data for ``a`` (``StructParams``): ``r_a = (q-1) p^m`` with ``m``
minimal such that ``a <= p^m``; ``phi(i, j) = r_a - a - j(q-1) + i r_a``; and
``j_max = floor((r_a - a)/(q-1))``.  The recursion adds, for every full
period ``r_a`` contained in ``b``, one translate of the increment set ``T_a``.

Recipe tags used in predictions and reports:

``main``          increment set from the prime-q carry rule (or the small-a table
                  for even q), initial values resolved separately
``q4``            increment set from the binary carry-count rule for q = 4
``full:<case>``   closed formulas for small ``a`` (both parts at once)
``large-index``   closed formulas for ``(a, b)`` near powers of q
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

from .errors import (
    InvalidFamily,
    InvalidIndex,
    MZVError,
    NotApplicable,
    NotCovered,
    UndefinedCoefficient,
)
from .ffield import FieldCtx, base_p_digits, has_carry, lucas_binom
from .solver import ShuffleSet, TaSet, solve_shuffle

FULL_CASES = {
    # (q parity / shape, a) -> tag
    "even-a2": "full:q-even-a2",
    "two-a3": "full:q2-a3",
    "even-a3": "full:q-even-a3",
    "even-a4": "full:q-even-a4",
    "odd-a2": "full:q-odd-a2",
    "odd-a3": "full:q-odd-a3",
}


@dataclass(frozen=True)
class StructParams:
    q: int
    p: int
    a: int
    m: int
    r: int
    j_max: int

    def phi(self, i: int, j: int = 0) -> int:
        return self.r - self.a - j * (self.q - 1) + i * self.r


def struct_params(ctx: FieldCtx, a: int) -> StructParams:
    """
    >>> struct_params(FieldCtx(5), 2)
    StructParams(q=5, p=5, a=2, m=1, r=20, j_max=4)
    """
    if a < 1:
        raise InvalidIndex("a must be positive")
    p, q = ctx.p, ctx.q
    m, pm = 0, 1
    while pm < a:
        m += 1
        pm *= p
    r = (q - 1) * pm
    return StructParams(q, p, a, m, r, (r - a) // (q - 1))


def t_of(p: int, a: int) -> int:
    """``prod_{j<p-1} (p-j)^mu_j`` over the base-p digits of ``a - 1``."""
    if a < 1:
        raise InvalidIndex("a must be positive")
    out = 1
    for dgt in base_p_digits(a - 1, p):
        if dgt <= p - 2:
            out *= p - dgt
    return out


def c_of(ctx: FieldCtx, a: int, j: int) -> int:
    """Coefficient attached to ``phi(j)`` for prime ``q``."""
    if ctx.n != 1:
        raise NotApplicable("coefficients c_{a,j} are only defined for prime q")
    sp = struct_params(ctx, a)
    p = ctx.p
    if not 0 <= j <= sp.j_max:
        raise InvalidIndex(f"j = {j} outside [0, {sp.j_max}]")
    if j == 0:
        return 1
    binom = lucas_binom(sp.r - a, j * (p - 1), p)
    if binom == 0:
        raise InvalidIndex(f"C({sp.r - a}, {j * (p - 1)}) vanishes mod {p}; j is not in the support")
    ceil = -(-j * (p - 1) // sp.j_max)
    if ceil % p == 0:
        raise UndefinedCoefficient(f"{ceil} is not invertible mod {p}")
    return pow(ceil, -1, p) * binom % p


def ta_prime(ctx: FieldCtx, a: int) -> TaSet:
    """Carry-free ``j`` with their ``c_of`` coefficients (``q`` prime)."""
    if ctx.n != 1:
        raise NotApplicable("ta_prime needs q prime")
    sp = struct_params(ctx, a)
    q = ctx.q
    entries = [(c_of(ctx, a, j), sp.phi(0, j), j)
               for j in range(sp.j_max + 1) if not has_carry(j * (q - 1), sp.phi(0, j), q)]
    warn = []
    t = t_of(ctx.p, a)
    if len(entries) != t:
        warn.append(f"|T_{a}| = {len(entries)} but t_{a} = {t}")
    return TaSet(a, tuple(entries), tuple(warn))


def _ones(x: int) -> int:
    return bin(x).count("1")


def ta_q4(ctx: FieldCtx, a: int) -> TaSet:
    """Binary rule for ``q = 4``.

    Carry-free ``j`` always enter.  Among ``j`` whose binary addition
    ``j(q-1) + phi(j)`` carries exactly once (total number of 1-bits one more
    than in ``r_a - a``), the ones with the largest total bit length of the
    two summands enter as well.
    """
    if ctx.q != 4:
        raise NotApplicable("ta_q4 needs q = 4")
    sp = struct_params(ctx, a)
    target = 1 + _ones(sp.r - a)
    keep, cands = [], []
    for j in range(sp.j_max + 1):
        x, y = 3 * j, sp.phi(0, j)
        if not has_carry(x, y, 2):
            keep.append(j)
        elif _ones(x) + _ones(y) == target:
            cands.append((x.bit_length() + y.bit_length(), j))
    if cands:
        top = max(alpha for alpha, _ in cands)
        keep += [j for alpha, j in cands if alpha == top]
    return TaSet(a, tuple((1, sp.phi(0, j), j) for j in keep))


def ta_table_small_a(ctx: FieldCtx, a: int) -> TaSet:
    """Increment sets for even ``q`` and ``a`` in {2, 3, 4}."""
    if ctx.p != 2 or a not in (2, 3, 4):
        raise NotApplicable("table covers even q and a in {2, 3, 4}")
    sp = struct_params(ctx, a)
    js = [0, sp.j_max] if a == 3 else [0]
    return TaSet(a, tuple((1, sp.phi(0, j), j) for j in sorted(set(js))))


# ---------------------------------------------------------------------------
# predictions


@dataclass
class Prediction:
    recipe: str
    shuffle: ShuffleSet | None
    initial_provenance: str  # band | full-formula | solver-assisted | unavailable | n/a
    warnings: list = field(default_factory=list)

    @property
    def partial(self) -> bool:
        return self.initial_provenance == "unavailable" or self.shuffle is None

    def to_dict(self) -> dict:
        d = self.shuffle.to_dict() if self.shuffle is not None else {}
        d.pop("certified", None)
        d.update({"recipe": self.recipe, "initial_provenance": self.initial_provenance,
                  "partial": self.partial, "warnings": list(self.warnings)})
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _Int(num: int, den: int) -> int:
    """1 when ``num/den`` is an integer, else 0."""
    return 1 if num % den == 0 else 0


class _Acc:
    """Accumulates ``c S_d(a_j, w - a_j)`` terms, summing repeated ``a_j`` mod p."""

    def __init__(self, ctx: FieldCtx, a: int, b: int):
        self.ctx, self.a, self.b = ctx, a, b
        self.terms: dict = {}
        self.warnings: list = []

    def add(self, c: int, aj: int):
        c %= self.ctx.p
        if not c:
            return
        w = self.a + self.b
        if not 1 <= aj <= w - 1:
            self.warnings.append(f"dropped term with a_j = {aj} outside [1, {w - 1}]")
            return
        if aj in self.terms:
            self.warnings.append(f"a_j = {aj} produced twice; coefficients added")
        self.terms[aj] = (self.terms.get(aj, 0) + c) % self.ctx.p

    def guarded(self, sp: StructParams, j: int, c: int = 1):
        """All ``i >= 0`` with ``b - phi(i, j) > a``."""
        i = 0
        while self.b - sp.phi(i, j) > self.a:
            self.add(c, self.b - sp.phi(i, j))
            i += 1

    def shuffle(self) -> ShuffleSet:
        return ShuffleSet(self.ctx, self.a, self.b,
                          tuple((c, aj) for aj, c in self.terms.items() if c))


def full_case(ctx: FieldCtx, a: int) -> str | None:
    p = ctx.p
    if p == 2:
        if a == 2:
            return "even-a2"
        if a == 3:
            return "two-a3" if ctx.q == 2 else "even-a3"
        if a == 4:
            return "even-a4"
    else:
        if a == 2:
            return "odd-a2"
        if a == 3:
            return "odd-a3"
    return None


def full_delta_small_a(ctx: FieldCtx, a: int, b: int) -> Prediction:
    """Closed formula for ``S(a, b)`` when ``(q, a)`` is covered.

    Covered: ``q`` even with ``a`` in {2, 3, 4}; ``q`` odd with ``a`` in {2, 3}.
    """
    case = full_case(ctx, a)
    if case is None:
        raise NotCovered(f"no closed formula for q={ctx.q}, a={a}")
    if b < 1:
        raise InvalidIndex("b must be positive")
    q, p = ctx.q, ctx.p
    sp = struct_params(ctx, a)
    acc = _Acc(ctx, a, b)
    if case == "even-a2":
        sigma = (b - 1) // sp.r
        for i in range(sigma):
            acc.add(1, b - sp.phi(i, 0))
        acc.add(_Int(b, q - 1) * (b // (q - 1)), 2)
    elif case == "two-a3":
        acc.guarded(sp, 0)
        acc.guarded(sp, sp.j_max)
        hits = sum(_Int(b - i, sp.r) for i in (1, 2))
        acc.add(hits, 2)
        acc.add(hits, 3)
    elif case == "even-a3":
        acc.guarded(sp, 0)
        acc.guarded(sp, sp.j_max)
        if _Int(b + 1, q - 1):
            acc.add(comb((b + 1) // (q - 1) + 1, 2), 2)
        if _Int(b, q - 1):
            acc.add(comb(b // (q - 1) + 2, 2) - 1, 3)
    elif case == "even-a4":
        acc.guarded(sp, 0)
        acc.add(_Int(b - max(q - 3, 1), sp.r), 2)
        # the printed denominator "r_r" is read as r_4
        acc.add(_Int(b - 2 * q + 3, sp.r), 3)
        acc.add(sum(_Int(b - i * (q - 1), sp.r) for i in (1, 2, 3)), 4)
    elif case == "odd-a2":
        for j in range(p):
            acc.guarded(sp, p - 1 - j, j + 2)
        acc.add(_Int(b, q - 1) * (b // (q - 1)), 2)
    elif case == "odd-a3":
        not3 = 0 if p == 3 else 1
        acc.guarded(sp, 0)
        if not3:
            acc.guarded(sp, 3)
        for j in range(2, (p - 3) // 2 + 1):
            acc.guarded(sp, j + 2, comb(j + 1, 2))
            acc.guarded(sp, p + 1 - j, comb(j + 1, 2))
        if not3:
            acc.guarded(sp, (p + 3) // 2, comb((p + 1) // 2, 2))
        if _Int(b + 1, q - 1):
            acc.add(comb((b + 1) // (q - 1) + 1, 2), 2)
        if _Int(b, q - 1):
            acc.add(comb(b // (q - 1) + 2, 2) - 1, 3)
    warnings = acc.warnings
    if a == 1:
        warnings.append("a = 1 is experimental")
    return Prediction(FULL_CASES[case], acc.shuffle(), "full-formula", warnings)


def ta_for(ctx: FieldCtx, a: int, source: str = "auto") -> TaSet:
    """Increment set from the requested source (``prime``, ``q4``, ``table``, ``auto``)."""
    if source == "auto":
        if ctx.n == 1:
            source = "prime"
        elif ctx.q == 4:
            source = "q4"
        elif ctx.p == 2 and a in (2, 3, 4):
            source = "table"
        else:
            raise NotApplicable(f"no increment-set rule for q={ctx.q}, a={a}")
    if source == "prime":
        return ta_prime(ctx, a)
    if source == "q4":
        return ta_q4(ctx, a)
    if source == "table":
        return ta_table_small_a(ctx, a)
    raise ValueError(f"unknown increment-set source {source!r}")


def predict_S(ctx: FieldCtx, a: int, b: int, ta_source: str = "auto",
              initial_source: str = "auto", solver_kw: dict | None = None) -> Prediction:
    """Recursive prediction: ``sigma`` translates of ``T_a`` plus ``S(a, b')``.

    ``b = r_a sigma + b'`` with ``0 < b' <= r_a``.  Initial values come from,
    in order: the band ``r_a - q + 2 <= b' <= r_a``, a closed formula,
    the solver.  ``initial_source`` restricts that list (``band``, ``full``,
    ``solver``, ``none``; ``auto`` tries all three).
    """
    if a < 1 or b < 1:
        raise InvalidIndex("a and b must be positive")
    q = ctx.q
    tag = "q4" if (ta_source == "q4" or (ta_source == "auto" and q == 4)) else "main"
    try:
        ta = ta_for(ctx, a, ta_source)
    except NotApplicable as exc:
        return Prediction(tag, None, "unavailable", [str(exc)])
    sp = struct_params(ctx, a)
    sigma, bp = divmod(b, sp.r)
    if bp == 0:
        sigma, bp = sigma - 1, sp.r
    acc = _Acc(ctx, a, b)
    acc.warnings.extend(ta.warnings)
    if a == 1:
        acc.warnings.append("a = 1 is experimental")
    for i in range(sigma):
        for c, phi, _ in ta.entries:
            acc.add(c, b - phi - i * sp.r)
    order = ["band", "full", "solver"] if initial_source == "auto" else [initial_source]
    provenance = "unavailable"
    initial = None
    for src in order:
        if src == "band" and sp.r - q + 2 <= bp <= sp.r:
            initial = [(c, bp - phi) for c, phi, j in ta.entries if (c, j) != (1, 0)]
            provenance = "band"
        elif src == "full" and full_case(ctx, a) is not None:
            initial = list(full_delta_small_a(ctx, a, bp).shuffle.pairs)
            provenance = "full-formula"
        elif src == "solver":
            try:
                initial = list(solve_shuffle(ctx, a, bp, **(solver_kw or {})).pairs)
                provenance = "solver-assisted"
            except MZVError as exc:
                acc.warnings.append(f"initial value S({a},{bp}) unavailable: {exc}")
        if initial is not None:
            break
    if initial is None:
        return Prediction(tag, None, "unavailable", acc.warnings)
    for c, aj in initial:
        acc.add(c, aj)
    return Prediction(tag, acc.shuffle(), provenance, acc.warnings)


# ---------------------------------------------------------------------------
# both indices large

FAMILIES = ("q^n,q^n-1", "q^n+1,q^n", "q^n-1,q^n+1", "q^(n-1),q^n+1", "q^n+1,q^n+1-q^i")


def family_indices(q: int, family: str, n: int, i: int | None = None) -> tuple[int, int]:
    Q = q**n
    if family == FAMILIES[0]:
        return Q, Q - 1
    if family == FAMILIES[1]:
        return Q + 1, Q
    if family == FAMILIES[2]:
        return Q - 1, Q + 1
    if family == FAMILIES[3]:
        return q ** (n - 1), Q + 1
    if family == FAMILIES[4]:
        if i is None or not 0 <= i <= n:
            raise InvalidFamily("this family needs 0 <= i <= n")
        return Q + 1, Q + 1 - q**i
    raise InvalidFamily(f"unknown family {family!r}; expected one of {FAMILIES}")


READINGS = ("printed", "solver-fit")


def large_index_delta(ctx: FieldCtx, family: str, n: int, i: int | None = None,
                      reading: str = "printed") -> Prediction:
    """Closed formulas for ``(a, b)`` built from ``q^n``.

    ``reading="printed"`` emits the formulas as stated, where the last family
    has an empty trailing sum.  ``reading="solver-fit"`` runs that trailing sum
    up to ``(q^n-1)/(q-1)`` and adds ``+S_d(2q^(n-1)+1, q^n-q^(n-1))`` to the
    ``(q^(n-1), q^n+1)`` family; both changes were fitted to solver output.
    """
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}; expected one of {READINGS}")
    fit = reading == "solver-fit"
    if n < 1:
        raise InvalidFamily("n must be positive")
    q, p = ctx.q, ctx.p
    a, b = family_indices(q, family, n, i)
    if a < 1 or b < 1:
        raise InvalidFamily(f"family {family} with n={n} gives ({a}, {b})")
    Q = q**n
    acc = _Acc(ctx, a, b)
    q_is_2 = 1 if q == 2 else 0
    if family == FAMILIES[0]:
        acc.add(-1, Q)
    elif family == FAMILIES[1]:
        acc.add(q_is_2, 2)
        for j in range(1, (Q - 1) // (q - 1) + 1):
            acc.add(-1, 3 + (j - 1) * (q - 1))
    elif family == FAMILIES[2]:
        for j in range(1, (Q + q - 2) // (q - 1) + 1):
            acc.add(-1, 2 + (j - 1) * (q - 1))
    elif family == FAMILIES[3]:
        acc.add(q_is_2, 2)
        # second index taken as q^(n-1) + q^n - 2 - (j-1)(q-1) so the weight is preserved
        for j in range(1, (q ** (n - 1) - 1) // (q - 1) + 1):
            acc.add(-1, 3 + (j - 1) * (q - 1))
        if fit:
            acc.add(1, 2 * q ** (n - 1) + 1)
    else:
        acc.add(q_is_2, 2)
        top = (Q - q**i) // (q - 1)
        for j in range(1, top + 1):
            acc.add(-1, 3 + (j - 1) * (q - 1))
        if fit:
            for j in range(top + 1, (Q - 1) // (q - 1) + 1):
                acc.add(1, 3 + (j - 1) * (q - 1))
        else:
            acc.warnings.append("trailing sum has an empty index range and contributes nothing")
    tag = "large-index" if not fit else "large-index:solver-fit"
    return Prediction(tag, acc.shuffle(), "n/a", acc.warnings)


# ---------------------------------------------------------------------------
# q = 4 shift


def check_shift_conjecture(ctx: FieldCtx, a: int, j: int, **solver_kw) -> bool:
    """Compare the pair sets of ``S(a, a-1)`` and ``S(a, a-4^j)`` (``q = 4``)."""
    if ctx.q != 4:
        raise NotApplicable("the shift rule is stated for q = 4")
    if j < 0 or a - 4**j < 1:
        raise InvalidIndex(f"need a - 4^j >= 1, got a={a}, j={j}")
    left = solve_shuffle(ctx, a, a - 1, **solver_kw)
    right = solve_shuffle(ctx, a, a - 4**j, **solver_kw)
    return left.as_set() == right.as_set()


def predict(ctx: FieldCtx, a: int, b: int, recipe: str = "auto", solver_kw: dict | None = None,
            reading: str = "printed") -> Prediction:
    """Dispatch used by the CLI and sweeps; ``reading`` only affects ``large-index``."""
    if recipe == "auto":
        if full_case(ctx, a) is not None:
            recipe = "full"
        elif ctx.q == 4:
            recipe = "q4"
        else:
            recipe = "main"
    if recipe == "full":
        try:
            return full_delta_small_a(ctx, a, b)
        except NotCovered as exc:
            return Prediction("full", None, "unavailable", [str(exc)])
    if recipe == "main":
        return predict_S(ctx, a, b, "auto" if ctx.q != 4 else "table", solver_kw=solver_kw)
    if recipe == "q4":
        if ctx.q != 4:
            return Prediction("q4", None, "unavailable", ["q4 recipe needs q = 4"])
        return predict_S(ctx, a, b, "q4", solver_kw=solver_kw)
    if recipe == "large-index":
        for fam in FAMILIES:
            for n in range(1, 8):
                for i in (range(n + 1) if fam == FAMILIES[4] else [None]):
                    try:
                        if family_indices(ctx.q, fam, n, i) == (a, b):
                            return large_index_delta(ctx, fam, n, i, reading)
                    except InvalidFamily:
                        continue
        return Prediction("large-index", None, "unavailable", [f"({a},{b}) is not in a large-index family"])
    raise ValueError(f"unknown recipe {recipe!r}")
