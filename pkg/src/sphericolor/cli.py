"""Command-line entry point.

Every subcommand prints a JSON report on stdout embedding the full run
configuration, and a one-line summary on stderr. Exit codes: 0 all checks
passed, 1 a checked property was violated, 2 usage or input error,
3 search exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone

from . import __version__
from .bounds import InsufficientGrid, bounds_report, default_digits, find_sufficient_parameters
from .coloring import (ColoringFormatError, NotPrimeError, PrimeModulus, dumps,
                       generate_random_coloring, load, save)
from .equidistribution import PrecisionError, QuadraticParams, branch_check, lemma_report, parse_real
from .geometry import (PreconditionError, identity_check, monte_carlo_blue_scan,
                       monte_carlo_red_check)
from .progression import (DEFAULT_MAX_M, DEFAULT_MAX_Q, GuardExceeded, pattern_arrays,
                          search_blue_progression, value_bound, witness_report)
from .bounds import pattern_count_bound
from .red import verification_report, verify_red_free

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_EXHAUSTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, result: dict, summary: str, started: float) -> None:
    config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    report = {
        "tool": "sphericolor",
        "version": __version__,
        "config": config,
        "result": result,
        "timing": {
            "finished": datetime.now(timezone.utc).isoformat(),
            "seconds": round(time.perf_counter() - started, 6),
        },
    }
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    print(summary, file=sys.stderr)


def _modulus(q: int) -> PrimeModulus:
    try:
        return PrimeModulus(q)
    except NotPrimeError as exc:
        raise UsageError(f"non-prime modulus: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _load(path):
    try:
        return load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except ColoringFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_gen(args, started):
    q = _modulus(args.q)
    tries = args.max_seeds if args.require_red_free else 1
    for seed in range(args.seed, args.seed + tries):
        coloring = generate_random_coloring(q, seed, args.p)
        red_free = verify_red_free(coloring)
        if red_free or not args.require_red_free:
            break
    else:
        _emit(args, {"q": q.q, "seeds_tried": tries, "found": False},
              f"no red-free coloring in {tries} seeds", started)
        return EXIT_EXHAUSTED
    if args.out:
        save(coloring, args.out)
    else:
        sys.stdout.write(dumps(coloring))
        print(f"q={q.q} seed={seed} red={coloring.red_count} red_free={red_free}", file=sys.stderr)
        return EXIT_OK
    result = {"q": q.q, "seed": seed, "seeds_tried": seed - args.seed + 1, "found": True,
              "red_count": coloring.red_count, "red_free": red_free, "path": args.out}
    _emit(args, result, f"wrote {args.out}: q={q.q} seed={seed} red_free={red_free}", started)
    return EXIT_OK


def cmd_verify(args, started):
    coloring = _load(args.coloring)
    red = verification_report(coloring)
    result = {"red": red, "blue": None}
    ok = red["red_free"]
    if args.m is not None:
        witness = search_blue_progression(coloring, args.m, max_m=args.max_m, max_q=args.max_q)
        result["blue"] = witness_report(coloring, args.m, witness)
        ok = ok and witness is None
    summary = f"q={coloring.q} red_free={red['red_free']}"
    if args.m is not None:
        summary += f" blue_witness={result['blue']['all_blue']}"
    _emit(args, result, summary, started)
    return EXIT_OK if ok else EXIT_VIOLATED


def _parse_grid(text: str):
    if text == "default":
        return None
    try:
        return [int(float(g)) for g in text.split(",") if g.strip()]
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None


def cmd_bounds(args, started):
    digits = args.digits
    if args.q is not None:
        report = bounds_report(args.q, args.m, digits=digits)
        _emit(args, report.to_dict(digits), f"q={args.q} sufficient={report.sufficient}", started)
        return EXIT_OK if report.sufficient else EXIT_VIOLATED
    grid = _parse_grid(args.grid)
    try:
        report = find_sufficient_parameters(grid, digits=digits)
    except InsufficientGrid as exc:
        _emit(args, {"sufficient": False, "error": str(exc)}, str(exc), started)
        return EXIT_EXHAUSTED
    result = report.to_dict(digits)
    result["m_le_1e50"] = report.m <= 10**50
    _emit(args, result, f"sufficient q={report.q}, m=q^3 ~ 1e{result['log10_m']}", started)
    return EXIT_OK


def cmd_lemma(args, started):
    q = _modulus(args.q)
    try:
        params = QuadraticParams(parse_real(args.alpha, args.digits), parse_real(args.beta, args.digits))
        result = lemma_report(params, q)
        result["branch_check"] = branch_check(params, q).holds(q.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, result, f"q={q.q} hits={result['hit_count']} pass={result['pass']}", started)
    return EXIT_OK if result["pass"] and result["branch_check"] else EXIT_VIOLATED


def cmd_geo(args, started):
    exact = not args.float
    if args.check_identity:
        result = identity_check(args.trials, args.n, args.m, args.seed, exact=exact, threads=args.threads)
        _emit(args, result, f"identity failures: {result['identity_failures']}/{args.trials}", started)
        return EXIT_OK if result["identity_failures"] == 0 else EXIT_VIOLATED
    if not args.coloring:
        raise UsageError("geo needs --check-identity or --coloring")
    coloring = _load(args.coloring)
    mode = args.mode or ("red" if args.m == 3 else "blue")
    if mode == "red":
        if args.m != 3:
            raise UsageError("the red check uses m=3")
        try:
            result = monte_carlo_red_check(coloring, args.n, args.trials, args.seed, exact=exact,
                                           threads=args.threads)
        except PreconditionError as exc:
            raise UsageError(str(exc)) from None
        ok = result["all_red"] == 0
    else:
        certify = coloring.q <= args.max_q and args.m <= args.max_m
        result = monte_carlo_blue_scan(coloring, args.n, args.m, args.trials, args.seed, exact=exact,
                                       certify=certify, threads=args.threads,
                                       max_m=args.max_m, max_q=args.max_q)
        ok = result["hit_consistency_failures"] == 0 and not (
            result.get("certified_blue_free") and result["all_blue"] > 0)
    _emit(args, result, f"{mode}: all_red={result['all_red']} all_blue={result['all_blue']}", started)
    return EXIT_OK if ok else EXIT_VIOLATED


def cmd_patterns(args, started):
    q = _modulus(args.q)
    pats, wits = pattern_arrays(q, args.m, max_m=args.max_m, max_q=args.max_q)
    result = {"q": q.q, "m": args.m, "pattern_count": int(pats.shape[0]),
              "sign_pattern_bound": pattern_count_bound(args.m),
              "value_bound": value_bound(q, args.m)}
    if args.list:
        result["patterns"] = pats.tolist()
    ok = result["pattern_count"] <= result["sign_pattern_bound"]
    if args.coloring:
        coloring = _load(args.coloring)
        if coloring.q != q.q:
            raise UsageError(f"coloring has q={coloring.q}, expected {q.q}")
        witness = search_blue_progression(coloring, args.m, max_m=args.max_m, max_q=args.max_q)
        result["blue"] = witness_report(coloring, args.m, witness)
    _emit(args, result, f"q={q.q} m={args.m}: {result['pattern_count']} patterns", started)
    return EXIT_OK if ok else EXIT_VIOLATED


def _guards(p):
    p.add_argument("--max-m", type=int, default=DEFAULT_MAX_M, help="arrangement guard on m")
    p.add_argument("--max-q", type=int, default=DEFAULT_MAX_Q, help="arrangement guard on q")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sphericolor", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=None, help="cap on worker threads")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random coloring of Z_q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float, default=None, help="red probability (default q^(-3/4))")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--require-red-free", action="store_true")
    p.add_argument("--max-seeds", type=int, default=20)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="verify a coloring file")
    p.add_argument("--coloring", required=True)
    p.add_argument("--m", type=int, default=None, help="also search for an all-blue progression")
    _guards(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="probabilistic bounds and the sufficient (q, m)")
    p.add_argument("--grid", default="default", help="'default' or comma-separated q values")
    p.add_argument("--q", type=int, default=None, help="evaluate a single q instead of a grid")
    p.add_argument("--m", type=int, default=None, help="with --q; default q^3")
    p.add_argument("--digits", type=int, default=default_digits())
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("lemma", help="quadratic equidistribution check for m = q^3")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--alpha", default="0", help="rational, decimal, pi, e or sqrt(N)")
    p.add_argument("--beta", default="0")
    p.add_argument("--digits", type=int, default=default_digits())
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("geo", help="Monte Carlo checks on random unit-step line copies")
    p.add_argument("--check-identity", action="store_true")
    p.add_argument("--coloring", default=None)
    p.add_argument("--mode", choices=("red", "blue"), default=None)
    p.add_argument("--n", type=int, default=10, help="dimension")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--float", action="store_true", help="float mode instead of exact rationals")
    _guards(p)
    p.set_defaults(func=cmd_geo)

    p = sub.add_parser("patterns", help="enumerate interval patterns of progressions")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--coloring", default=None)
    p.add_argument("--list", action="store_true", help="include every pattern in the report")
    _guards(p)
    p.set_defaults(func=cmd_patterns)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        return args.func(args, started)
    except (UsageError, GuardExceeded, PrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
