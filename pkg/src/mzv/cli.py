"""``mzv`` command line.

Exit codes: 0 success, 1 refutation / mismatch / no solution, 2 usage or
internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import shutil
import sys
from pathlib import Path

from .errors import MZVError, NonUniqueSolution, NoSolution
from .ffield import FieldCtx
from .hg import CACHE_ENV, HGCache, set_default_cache

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _int_list(text: str) -> list[int]:
    """``"2,3,7-9"`` -> ``[2, 3, 7, 8, 9]``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _field_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-p", type=int, required=True, help="characteristic")
    p.add_argument("-n", type=int, default=1, help="extension degree, q = p^n")
    p.add_argument("--modulus", help="explicit modulus, coefficients constant first, e.g. 2,2,1")
    p.add_argument("--cache", help=f"H/G cache directory (default ${CACHE_ENV})")


def _solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d-checks", type=int, default=3, help="exact checks at d = 1..N")
    p.add_argument("--restrict-even", action="store_true",
                   help="search only a_j with w - a_j divisible by q - 1")
    p.add_argument("--method", choices=("bivariate", "per-d"), default="bivariate")


def _reading_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--reading", choices=("printed", "solver-fit"), default="printed",
                   help="large-index formulas as printed or with the solver-fitted repairs")


def _ab_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-b", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mzv", description="Power sums and shuffle relations over F_q[t].")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="compute S(a,b) from the identity in F_q(t)[T]")
    _field_args(s), _ab_args(s), _solver_args(s)

    s = sub.add_parser("predict", help="predict S(a,b) from a recipe")
    _field_args(s), _ab_args(s), _solver_args(s)
    s.add_argument("--recipe", choices=("auto", "main", "full", "q4", "large-index"), default="auto")
    s.add_argument("--compare", action="store_true", help="also solve and exit 1 on mismatch")
    _reading_arg(s)

    s = sub.add_parser("prove", help="prove a relation for all d")
    _field_args(s), _ab_args(s), _solver_args(s)
    s.add_argument("--relation", help="relation JSON (solve/predict output); default: solve")
    s.add_argument("--recipe", choices=("auto", "main", "full", "q4", "large-index"),
                   help="prove a recipe prediction instead of a stored relation")
    _reading_arg(s)

    s = sub.add_parser("verify", help="check a relation exactly at given d")
    _field_args(s), _ab_args(s)
    s.add_argument("--relation", required=True)
    s.add_argument("--d", default="1,2,3", help="list of degrees, e.g. 0-4")

    s = sub.add_parser("sweep", help="recipe-vs-solver comparison on a grid")
    _field_args(s), _solver_args(s)
    s.add_argument("--a", required=True, help="values of a, e.g. 2-4")
    s.add_argument("--b", required=True, help="values of b, e.g. 1-40")
    s.add_argument("--recipe", choices=("auto", "main", "full", "q4", "large-index"), default="auto")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", help="CSV path (default stdout)")
    s.add_argument("--json", help="write the JSON summary here (default stderr)")
    s.add_argument("--timing", action="store_true",
                   help="fill time_ms (makes output run-dependent)")

    s = sub.add_parser("selftest", help="run the built-in consistency suites")
    s.add_argument("--cache", help="cache directory to exercise")
    s.add_argument("--quick", action="store_true")

    s = sub.add_parser("cache", help="inspect or clear the H/G cache")
    s.add_argument("action", choices=("info", "clear"))
    s.add_argument("--cache")
    return ap


def _ctx(args) -> FieldCtx:
    modulus = _int_list(args.modulus) if getattr(args, "modulus", None) else None
    return FieldCtx(args.p, args.n, modulus)


def _cache_dir(args) -> str | None:
    return getattr(args, "cache", None) or os.environ.get(CACHE_ENV) or None


def _solver_kw(args) -> dict:
    return {"d_checks": args.d_checks, "restrict_even": args.restrict_even, "method": args.method}


def _emit(obj) -> None:
    print(json.dumps(obj, indent=None))


def _load_relation(path: str, ctx: FieldCtx):
    from .solver import ShuffleSet

    data = json.loads(Path(path).read_text())
    return ShuffleSet.from_dict(data, ctx)


def cmd_solve(args) -> int:
    from .solver import solve_shuffle

    ctx = _ctx(args)
    try:
        s = solve_shuffle(ctx, args.a, args.b, **_solver_kw(args))
    except NonUniqueSolution as exc:
        _emit({"status": "non-unique", "message": str(exc),
               "solutions": [[{"c": c, "aj": aj} for c, aj in sol] for sol in exc.solutions]})
        return EXIT_FAIL
    except NoSolution as exc:
        print(f"NO SOLUTION for q={ctx.q}, a={args.a}, b={args.b}: {exc}", file=sys.stderr)
        _emit({"status": "no-solution", "q": ctx.q, "a": args.a, "b": args.b, "message": str(exc)})
        return EXIT_FAIL
    _emit(s.to_dict())
    return EXIT_OK


def cmd_predict(args) -> int:
    from .recipes import predict
    from .solver import solve_shuffle

    ctx = _ctx(args)
    pred = predict(ctx, args.a, args.b, args.recipe, solver_kw=_solver_kw(args),
                       reading=args.reading)
    out = pred.to_dict()
    code = EXIT_OK
    if args.compare and not pred.partial:
        sol = solve_shuffle(ctx, args.a, args.b, **_solver_kw(args))
        out["match"] = pred.shuffle.as_set() == sol.as_set()
        code = EXIT_OK if out["match"] else EXIT_FAIL
    _emit(out)
    return code


def cmd_prove(args) -> int:
    from .prover import REFUTED, prove_identity
    from .recipes import predict
    from .solver import solve_shuffle

    ctx = _ctx(args)
    if args.relation:
        rel = _load_relation(args.relation, ctx)
        if (rel.a, rel.b) != (args.a, args.b):
            print(f"relation is for ({rel.a},{rel.b}), not ({args.a},{args.b})", file=sys.stderr)
            return EXIT_USAGE
    elif args.recipe:
        pred = predict(ctx, args.a, args.b, args.recipe, solver_kw=_solver_kw(args),
                       reading=args.reading)
        if pred.partial:
            _emit({"status": "unavailable", "warnings": pred.warnings})
            return EXIT_FAIL
        rel = pred.shuffle
    else:
        rel = solve_shuffle(ctx, args.a, args.b, **_solver_kw(args))
    res = prove_identity(rel)
    _emit(res.to_dict())
    return EXIT_FAIL if res.status == REFUTED else EXIT_OK


def cmd_verify(args) -> int:
    from .solver import verify_at_d

    ctx = _ctx(args)
    rel = _load_relation(args.relation, ctx)
    results = {str(d): verify_at_d(rel, d) for d in _int_list(args.d)}
    _emit({"a": rel.a, "b": rel.b, "results": results, "all": all(results.values())})
    return EXIT_OK if all(results.values()) else EXIT_FAIL


def cmd_sweep(args) -> int:
    from .sweep import run_sweep

    ctx = _ctx(args)
    a_vals, b_vals = _int_list(args.a), _int_list(args.b)
    if not a_vals or not b_vals:
        print("empty grid", file=sys.stderr)
        return EXIT_USAGE
    report = run_sweep(ctx, a_vals, b_vals, args.recipe, args.jobs, _solver_kw(args),
                       _cache_dir(args), args.timing)
    text = report.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    summary = json.dumps(report.summary(), indent=2)
    if args.json:
        Path(args.json).write_text(summary + "\n")
    else:
        print(summary, file=sys.stderr)
    return EXIT_OK if report.ok() else EXIT_FAIL


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    return EXIT_OK if run_selftest(args.cache, quick=args.quick) else EXIT_FAIL


def cmd_cache(args) -> int:
    d = _cache_dir(args)
    if d is None:
        print(f"no cache directory (use --cache or ${CACHE_ENV})", file=sys.stderr)
        return EXIT_USAGE
    root = Path(d)
    files = sorted(root.rglob("*.json")) if root.exists() else []
    if args.action == "info":
        _emit({"directory": str(root), "entries": len(files),
               "bytes": sum(f.stat().st_size for f in files)})
    else:
        for sub in (root.iterdir() if root.exists() else []):
            if sub.is_dir() and sub.name.startswith("q"):
                shutil.rmtree(sub)
        _emit({"directory": str(root), "removed": len(files)})
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "predict": cmd_predict, "prove": cmd_prove, "verify": cmd_verify,
            "sweep": cmd_sweep, "selftest": cmd_selftest, "cache": cmd_cache}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    set_default_cache(HGCache(_cache_dir(args)))
    try:
        return COMMANDS[args.cmd](args)
    except (MZVError, ValueError, OSError) as exc:
        print(f"mzv: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
