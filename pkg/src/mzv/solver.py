"""Find and certify the expansion ``Delta_d(a,b) = sum c_j S_d(a_j, w - a_j)``.

The primary path works with the bivariate identity

    H_a H_b - H_w = sum_j c_j H_{a_j} G_{w-a_j}      in F_q(t)[T],

so a solution is simultaneously a proof for every ``d``.  Unknowns live in
F_p; each F_q coefficient of ``T^e t^f`` contributes ``n`` F_p equations
(one per power-basis coordinate).  Equations are fed to an incremental
row reduction block by block until the unknowns are pinned down, and the
resulting candidate is then checked against the full identity.

``G_k`` exists only for ``k`` divisible by ``q - 1``, so the bivariate basis
is automatically the 'even' one.  A per-``d`` solve over the unrestricted
basis runs alongside it (unless ``restrict_even`` is set) to test that no odd
term was missed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import flint

from .errors import InvalidIndex, NonUniqueSolution, NoPolynomialSolution, NoSolution
from .ffield import FieldCtx
from .hg import HGCache, compute_G, compute_H
from .polyrat import BiPoly, bipoly_lincomb
from .powersums import delta_scaled, power_sum_less_scaled, power_sum_scaled


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class ShuffleSet:
    """The pairs ``(c_j, a_j)`` of one expansion, sorted by ``a_j``."""

    ctx: FieldCtx
    a: int
    b: int
    pairs: tuple = ()
    certified: str = "bivariate"

    def __post_init__(self):
        p = self.ctx.p
        w = self.a + self.b
        norm = {}
        for c, aj in self.pairs:
            c %= p
            if not 1 <= aj <= w - 1:
                raise InvalidIndex(f"a_j = {aj} outside [1, {w - 1}]")
            if aj in norm:
                raise InvalidIndex(f"repeated a_j = {aj}")
            if c:
                norm[aj] = c
        object.__setattr__(self, "pairs", tuple((norm[k], k) for k in sorted(norm)))

    @property
    def weight(self) -> int:
        return self.a + self.b

    @property
    def q(self) -> int:
        return self.ctx.q

    def as_set(self) -> frozenset:
        return frozenset(self.pairs)

    def same_pairs(self, other: ShuffleSet) -> bool:
        return self.pairs == other.pairs

    def scaled(self, m: int) -> ShuffleSet:
        """Image under ``(a, b) -> (m a, m b)`` for ``m`` a power of p."""
        return ShuffleSet(self.ctx, m * self.a, m * self.b,
                          tuple((c, m * aj) for c, aj in self.pairs), self.certified)

    def to_dict(self) -> dict:
        d = {"q": self.ctx.q, "p": self.ctx.p, "n": self.ctx.n, "a": self.a, "b": self.b,
             "weight": self.weight, "pairs": [{"c": c, "aj": aj} for c, aj in self.pairs],
             "certified": self.certified}
        if self.ctx.modulus != FieldCtx(self.ctx.p, self.ctx.n).modulus:
            d["modulus"] = list(self.ctx.modulus)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, data: dict, ctx: FieldCtx | None = None) -> ShuffleSet:
        if ctx is None:
            ctx = FieldCtx(data["p"], data.get("n", 1), data.get("modulus"))
        if "q" in data and data["q"] != ctx.q:
            raise ValueError(f"relation is for q={data['q']}, field has q={ctx.q}")
        pairs = tuple((int(e["c"]), int(e["aj"])) for e in data["pairs"])
        return cls(ctx, int(data["a"]), int(data["b"]), pairs, data.get("certified", "bivariate"))

    @classmethod
    def from_json(cls, text: str, ctx: FieldCtx | None = None) -> ShuffleSet:
        return cls.from_dict(json.loads(text), ctx)

    def __str__(self):
        body = ", ".join(f"({c},{aj})" for c, aj in self.pairs)
        return f"S({self.a},{self.b}) = {{{body}}}"


@dataclass(frozen=True)
class TaSet:
    """Pairs ``(c, phi(j))`` indexed by ``j``, sorted by ``j``."""

    a: int
    entries: tuple = ()  # (c, phi, j)
    warnings: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: e[2])))

    def __len__(self):
        return len(self.entries)

    def pairs(self) -> frozenset:
        return frozenset((c, phi) for c, phi, _ in self.entries)

    def phis(self) -> list:
        return [phi for _, phi, _ in self.entries]

    def to_dict(self) -> dict:
        return {"a": self.a, "entries": [{"c": c, "phi": phi, "j": j} for c, phi, j in self.entries]}


# ---------------------------------------------------------------------------
# F_p linear algebra


class _Echelon:
    """Incremental row reduction of ``[A | y]`` over F_p (``ncols`` unknowns)."""

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self.rows: list = []  # reduced rows of length ncols + 1
        self.inconsistent = False

    @property
    def rank(self) -> int:
        return sum(1 for r in self.rows if any(r[: self.ncols]))

    def full(self) -> bool:
        return self.rank == self.ncols

    def add(self, block: list) -> None:
        if not block or self.inconsistent:
            return
        width = self.ncols + 1
        rows = self.rows + block
        flat = [x for r in rows for x in r]
        m, rk = flint.nmod_mat(len(rows), width, flat, self.p).rref()
        self.rows = [[int(m[i, j]) for j in range(width)] for i in range(rk)]
        for r in self.rows:
            if not any(r[: self.ncols]) and r[self.ncols]:
                self.inconsistent = True

    def solution(self) -> list:
        """Particular solution with free variables set to zero."""
        x = [0] * self.ncols
        for r in self.rows:
            piv = next(j for j in range(self.ncols) if r[j])
            x[piv] = r[self.ncols] * pow(r[piv], -1, self.p) % self.p
        return x

    def kernel(self) -> list:
        """Basis of the homogeneous solution space."""
        if not self.rows:
            return [[int(i == j) for j in range(self.ncols)] for i in range(self.ncols)]
        flat = [x for r in self.rows for x in r[: self.ncols]]
        mat = flint.nmod_mat(len(self.rows), self.ncols, flat, self.p)
        ns, nullity = mat.nullspace()
        return [[int(ns[i, j]) for i in range(self.ncols)] for j in range(nullity)]


def _coords(ctx: FieldCtx, f, length: int) -> list:
    """``n`` coordinate vectors (each of ``length`` F_p entries) of a flint poly."""
    n = ctx.n
    if f is None or f.is_zero():
        return [[0] * length for _ in range(n)]
    cs = f.coeffs()
    if n == 1:
        v = [int(c) for c in cs]
        return [v + [0] * (length - len(v))]
    out = [[0] * length for _ in range(n)]
    for i, c in enumerate(cs):
        for k, x in enumerate(c.to_list()):
            out[k][i] = int(x)
    return out


def _block(ctx: FieldCtx, cols: list, rhs) -> list:
    """Rows ``[col_0 ... col_{J-1} | rhs]`` for one batch of polynomials."""
    length = 1 + max((c.degree() for c in cols + [rhs] if c is not None and not c.is_zero()),
                     default=-1)
    if length == 0:
        return []
    vecs = [_coords(ctx, c, length) for c in cols] + [_coords(ctx, rhs, length)]
    rows = []
    for k in range(ctx.n):
        for i in range(length):
            row = [v[k][i] for v in vecs]
            if any(row):
                rows.append(row)
    return rows


def _lcm(polys):
    out = None
    for d in polys:
        if out is None:
            out = d
        elif out != d:
            out = out * d.exact_division(out.gcd(d))
    return out


# ---------------------------------------------------------------------------
# bivariate path


def _basis(q: int, w: int, restrict_even: bool) -> list:
    return [aj for aj in range(1, w) if not restrict_even or (w - aj) % (q - 1) == 0]


def bivariate_sides(ctx: FieldCtx, a: int, b: int, basis, cache: HGCache | None = None):
    """``(H_a H_b - H_w, [H_{a_j} G_{w-a_j}])`` for the given ``a_j``."""
    w = a + b
    lhs = compute_H(ctx, a, cache) * compute_H(ctx, b, cache) - compute_H(ctx, w, cache)
    cols = [compute_H(ctx, aj, cache) * compute_G(ctx, w - aj, cache) for aj in basis]
    return lhs, cols


def _solve_bivariate(ctx, a, b, cache):
    q, p = ctx.q, ctx.p
    w = a + b
    basis = _basis(q, w, True)
    lhs, cols = bivariate_sides(ctx, a, b, basis, cache)
    den = _lcm([lhs.den] + [c.den for c in cols])
    lmult = den.exact_division(lhs.den)
    cmults = [den.exact_division(c.den) for c in cols]
    exps = sorted(set(lhs.num).union(*(c.num for c in cols)))
    ech = _Echelon(len(basis), p)
    for e in exps:
        block = _block(ctx, [c.num[e] * m if e in c.num else None for c, m in zip(cols, cmults)],
                       lhs.num[e] * lmult if e in lhs.num else None)
        ech.add(block)
        if ech.inconsistent:
            raise NoSolution(f"no F_p combination of H_aj G_(w-aj) equals H_{a}H_{b} - H_{w}",
                             q, a, b)
        if ech.full():
            break
    x = ech.solution()
    resid = residual(ctx, a, b, list(zip(x, basis)), lhs, cols)
    if not resid.is_zero():
        # the reduced system was consistent but the full identity is not
        raise NoSolution("bivariate identity fails for the only candidate", q, a, b)
    if not ech.full():
        kern = ech.kernel()
        raise NonUniqueSolution(
            f"S({a},{b}) over F_{q} is not unique (kernel dimension {len(kern)})",
            _enumerate_solutions(x, kern, p, basis), [list(zip(v, basis)) for v in kern])
    return [(c, aj) for c, aj in zip(x, basis) if c]


def _enumerate_solutions(x, kern, p, basis, limit=64):
    sols = []
    total = p ** len(kern)
    for idx in range(min(total, limit)):
        v = list(x)
        r = idx
        for k in kern:
            coef, r = r % p, r // p
            v = [(vi + coef * ki) % p for vi, ki in zip(v, k)]
        sols.append([(c, aj) for c, aj in zip(v, basis) if c])
    return sols


def residual(ctx: FieldCtx, a: int, b: int, pairs, lhs: BiPoly | None = None,
             cols: list | None = None, cache: HGCache | None = None) -> BiPoly:
    """``H_a H_b - H_w - sum c_j H_{a_j} G_{w-a_j}`` as a BiPoly."""
    w = a + b
    pairs = [(c % ctx.p, aj) for c, aj in pairs if c % ctx.p]
    if lhs is None:
        lhs = compute_H(ctx, a, cache) * compute_H(ctx, b, cache) - compute_H(ctx, w, cache)
    if cols is None:
        terms = [(-c, compute_H(ctx, aj, cache) * compute_G(ctx, w - aj, cache)) for c, aj in pairs]
    else:
        lookup = dict(zip(_basis(ctx.q, w, True), cols))
        terms = [(-c, lookup[aj]) for c, aj in pairs]
    return bipoly_lincomb(ctx, [(1, lhs)] + terms)


# ---------------------------------------------------------------------------
# per-d path


def _solve_per_d(ctx, a, b, basis, degrees=(2, 3, 4)):
    """Solve ``Delta_d = sum c_j S_d(a_j, w-a_j)`` using only the listed ``d``."""
    p = ctx.p
    w = a + b
    ech = _Echelon(len(basis), p)
    used = []
    for d in degrees:
        # everything scaled by ell_d^w is polynomial
        cols = [_double_scaled(ctx, d, aj, w - aj) for aj in basis]
        ech.add(_block(ctx, cols, delta_scaled(ctx, d, a, b)))
        used.append(d)
        if ech.inconsistent:
            raise NoSolution(f"no expansion of Delta_{d}({a},{b}) over the basis", ctx.q, a, b)
        if ech.full():
            break
    x = ech.solution()
    if not ech.full():
        kern = ech.kernel()
        raise NonUniqueSolution(
            f"S({a},{b}) over F_{ctx.q} not determined by d in {used}",
            _enumerate_solutions(x, kern, p, basis), [list(zip(v, basis)) for v in kern])
    return [(c, aj) for c, aj in zip(x, basis) if c], used


# ---------------------------------------------------------------------------
# public API


def _double_scaled(ctx, d, s1, s2):
    """``ell_d^(s1+s2) S_d(s1, s2)``."""
    return power_sum_scaled(ctx, d, s1) * power_sum_less_scaled(ctx, d, s2)


def verify_at_d(s: ShuffleSet, d: int) -> bool:
    """Check ``Delta_d(a,b) = sum c_j S_d(a_j, w-a_j)`` exactly at one ``d``."""
    ctx = s.ctx
    w = s.weight
    acc = delta_scaled(ctx, d, s.a, s.b)
    for c, aj in s.pairs:
        acc -= c * _double_scaled(ctx, d, aj, w - aj)
    return acc.is_zero()


def solve_shuffle(ctx: FieldCtx, a: int, b: int, d_checks: int = 3, restrict_even: bool = False,
                  method: str = "bivariate", cache: HGCache | None = None) -> ShuffleSet:
    """Compute ``S(a, b)``.

    ``method="bivariate"`` (default) solves and proves over F_q(t)[T]; the
    result is tagged ``certified="bivariate"``.  Unless ``restrict_even`` is
    set, a per-``d`` solve over every ``a_j in [1, w-1]`` is run as well; if it
    disagrees (an odd term would be needed) its answer is returned tagged
    ``"numeric"``.  ``method="per-d"`` skips the bivariate step entirely.

    >>> from mzv.ffield import FieldCtx
    >>> print(solve_shuffle(FieldCtx(5), 2, 10))
    S(2,10) = {(3,4), (2,8)}
    """
    if a < 1 or b < 1:
        raise InvalidIndex("a and b must be positive")
    q = ctx.q
    w = a + b
    if method not in ("bivariate", "per-d"):
        raise ValueError(f"unknown method {method!r}")
    if method == "bivariate":
        try:
            pairs = _solve_bivariate(ctx, a, b, cache)
            certified = "bivariate"
        except NoSolution:
            if restrict_even:
                raise
            pairs, certified = None, "numeric"
        if not restrict_even:
            full, _ = _solve_per_d(ctx, a, b, _basis(q, w, False))
            if pairs is None or sorted(full, key=lambda x: x[1]) != sorted(pairs, key=lambda x: x[1]):
                pairs, certified = full, "numeric"
    else:
        pairs, _ = _solve_per_d(ctx, a, b, _basis(q, w, restrict_even))
        certified = "numeric"
    result = ShuffleSet(ctx, a, b, tuple(pairs), certified)
    for d in range(1, d_checks + 1):
        if not verify_at_d(result, d):
            raise NoSolution(f"solution fails the exact check at d={d}", q, a, b)
    return result


def extract_T(ctx: FieldCtx, a: int, b: int, **kw) -> list:
    """``S(a, b) minus S(a, b - r_a)``, the empirical increment of the recursion."""
    from .recipes import struct_params

    r = struct_params(ctx, a).r
    if b <= r:
        raise InvalidIndex(f"extract_T needs b > r_a = {r}")
    new = solve_shuffle(ctx, a, b, **kw).as_set()
    old = solve_shuffle(ctx, a, b - r, **kw).as_set()
    return sorted(new - old, key=lambda x: x[1])


__all__ = ["ShuffleSet", "TaSet", "solve_shuffle", "verify_at_d", "extract_T", "residual",
           "bivariate_sides", "NoPolynomialSolution"]
