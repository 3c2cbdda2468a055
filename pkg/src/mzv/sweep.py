"""Grid sweeps comparing recipe predictions with solver ground truth."""
from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import MZVError, NonUniqueSolution, NoSolution
from .ffield import FieldCtx
from .hg import HGCache, set_default_cache
from .recipes import predict
from .solver import solve_shuffle

COLUMNS = ("q", "p", "n", "a", "b", "recipe", "match", "n_terms", "time_ms", "warnings")
OUTCOMES = ("MATCH", "MISMATCH", "PARTIAL", "AMBIGUOUS", "ERROR")


@dataclass
class SweepRow:
    q: int
    p: int
    n: int
    a: int
    b: int
    recipe: str
    match: str
    n_terms: int | str
    time_ms: int | str
    warnings: str
    solver_status: str = "ok"
    even_violations: int = 0
    pairs: tuple = ()

    def values(self) -> list:
        return [getattr(self, c) for c in COLUMNS]


@dataclass
class SweepReport:
    rows: list = field(default_factory=list)

    def totals(self, rows=None) -> dict:
        out = {k: 0 for k in OUTCOMES}
        for r in self.rows if rows is None else rows:
            out[r.match] += 1
        return out

    def match_rate(self) -> float | None:
        t = self.totals()
        judged = t["MATCH"] + t["MISMATCH"] + t["AMBIGUOUS"] + t["ERROR"]
        return None if judged == 0 else t["MATCH"] / judged

    def even_violations(self) -> int:
        return sum(r.even_violations for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow(r.values())
        return buf.getvalue()

    def summary(self) -> dict:
        rate = self.match_rate()
        return {"cells": len(self.rows), "totals": self.totals(),
                "match_percent": None if rate is None else round(100 * rate, 2),
                "p_divides_b": self.totals([r for r in self.rows if r.b % r.p == 0]),
                "even_violations": self.even_violations(),
                "mismatches": [[r.q, r.a, r.b] for r in self.rows if r.match == "MISMATCH"]}

    def ok(self) -> bool:
        t = self.totals()
        return t["MISMATCH"] == t["AMBIGUOUS"] == t["ERROR"] == 0


def _init_worker(cache_dir):
    set_default_cache(HGCache(cache_dir))


def run_cell(task) -> SweepRow:
    """Solve, predict and compare one ``(a, b)``; never raises."""
    (p, n, modulus), a, b, recipe, solver_kw, timing = task
    ctx = FieldCtx(p, n, modulus)
    q = ctx.q
    start = time.perf_counter()
    warnings: list = []
    tag = recipe
    try:
        sol = solve_shuffle(ctx, a, b, **solver_kw)
        status = sol.certified
        pred = predict(ctx, a, b, recipe, solver_kw=solver_kw)
        tag = pred.recipe
        warnings.extend(pred.warnings)
        if pred.partial:
            match = "PARTIAL"
        else:
            match = "MATCH" if pred.shuffle.as_set() == sol.as_set() else "MISMATCH"
        n_terms = len(sol.pairs)
        even = sum(1 for _, aj in sol.pairs if (a + b - aj) % (q - 1))
        pairs = sol.pairs
    except NonUniqueSolution as exc:
        status, match, n_terms, even, pairs = "non-unique", "AMBIGUOUS", "", 0, ()
        warnings.append(str(exc))
    except NoSolution as exc:
        status, match, n_terms, even, pairs = "no-solution", "ERROR", "", 0, ()
        warnings.append(f"NO SOLUTION: {exc}")
    except MZVError as exc:
        status, match, n_terms, even, pairs = "error", "ERROR", "", 0, ()
        warnings.append(f"{type(exc).__name__}: {exc}")
    elapsed = round(1000 * (time.perf_counter() - start)) if timing else ""
    return SweepRow(q, p, n, a, b, tag, match, n_terms, elapsed, ";".join(warnings),
                    status, even, pairs)


def run_sweep(ctx: FieldCtx, a_values, b_values, recipe: str = "auto", jobs: int = 1,
              solver_kw: dict | None = None, cache_dir: str | None = None,
              timing: bool = False) -> SweepReport:
    """Every ``(a, b)`` cell of the grid, sorted by ``(a, b)``.

    Cells run in a process pool when ``jobs > 1``; ordering of the report does
    not depend on completion order.
    """
    key = (ctx.p, ctx.n, tuple(ctx.modulus))
    tasks = [(key, a, b, recipe, dict(solver_kw or {}), timing)
             for a in sorted(set(a_values)) for b in sorted(set(b_values))]
    if jobs <= 1:
        if cache_dir is not None:
            _init_worker(cache_dir)
        rows = [run_cell(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(cache_dir,)) as pool:
            rows = list(pool.map(run_cell, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    rows.sort(key=lambda r: (r.q, r.a, r.b))
    return SweepReport(rows)


def default_jobs() -> int:
    return max(1, min(8, os.cpu_count() or 1))
