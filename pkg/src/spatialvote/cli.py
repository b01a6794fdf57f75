"""``spatialvote`` command line.

Exit codes: 0 success, 2 method/instance mismatch, 3 unreadable or malformed
input, 4 a witness failed exact re-verification.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from pathlib import Path

from .election import ElectionInstance, critical_regions, eval_nu, rank_from_voters, reduce_fls, scoring_balls
from .geometry import DimensionError, as_rat, rat_str
from .instance_io import (
    InstanceFormatError,
    dumps_instance,
    instance_to_dict,
    load_instance,
    load_matrix,
    load_scoring,
)
from .oracles import MODES, GenSpec, gen_instance
from .single import VerificationError
from .solve import METHODS, OBJECTIVES, IncompatibleMethod, solve, solve_scoring

EXIT_OK, EXIT_INCOMPATIBLE, EXIT_PARSE, EXIT_VERIFY = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def parse_point(text: str, d: int) -> tuple:
    try:
        pt = tuple(as_rat(tok) for tok in text.split(","))
    except (ValueError, TypeError) as exc:
        raise CliError(f"bad point {text!r}: {exc}", EXIT_PARSE) from None
    if len(pt) != d:
        raise CliError(f"point has {len(pt)} coordinates, instance has d = {d}", EXIT_PARSE)
    return pt


def _load(path) -> ElectionInstance:
    try:
        return load_instance(path)
    except InstanceFormatError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from None
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}", EXIT_PARSE) from None


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    inst = _load(args.instance)
    started = time.perf_counter()
    try:
        if args.scoring:
            try:
                q = load_scoring(args.scoring)
            except (InstanceFormatError, OSError) as exc:
                raise CliError(f"{args.scoring}: {exc}", EXIT_PARSE) from None
            try:
                ms = scoring_balls(inst, q)
            except ValueError as exc:
                raise CliError(str(exc), EXIT_PARSE) from None
            res = solve_scoring(ms, args.method)
            verified = ms.score(res.witness) == res.nu
        else:
            res = solve(inst, args.method, args.objective, threads=args.threads)
            nu, won = eval_nu(inst, res.witness)
            verified = nu == res.nu and won == res.voters
    except IncompatibleMethod as exc:
        raise CliError(str(exc), EXIT_INCOMPATIBLE) from None
    except VerificationError as exc:
        raise CliError(f"verification failed: {exc}", EXIT_VERIFY) from None
    elapsed = time.perf_counter() - started
    report = res.as_json()
    report["objective"] = "score" if args.scoring else args.objective
    report["wall_time_s"] = round(elapsed, 6)
    report["verified"] = verified
    if not verified:
        _emit(report, args.out)
        raise CliError("witness failed re-verification", EXIT_VERIFY)
    _emit(report, args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    inst = _load(args.instance)
    pt = parse_point(args.point, inst.d)
    balls = critical_regions(inst)
    nu, won = eval_nu(inst, pt, balls)
    out = {
        "point": [rat_str(v) for v in pt],
        "nu": nu,
        "rank": rank_from_voters(inst, won, balls),
        "voters": sorted(won),
    }
    if args.scoring:
        try:
            q = load_scoring(args.scoring)
        except (InstanceFormatError, OSError) as exc:
            raise CliError(f"{args.scoring}: {exc}", EXIT_PARSE) from None
        out["score"] = scoring_balls(inst, q).score(pt)
    _emit(out, None)
    return EXIT_OK


def _seed(value: int) -> int:
    env = os.environ.get("SPATIALVOTE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise CliError(f"SPATIALVOTE_SEED={env!r} is not an integer", EXIT_PARSE) from None
    return value


def cmd_gen(args) -> int:
    try:
        spec = GenSpec(args.d, args.n, args.m, args.p, args.bound, _seed(args.seed), args.mode)
        inst = gen_instance(spec)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    text = dumps_instance(inst)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_reduce_fls(args) -> int:
    try:
        A, k = load_matrix(args.matrix)
        inst, k = reduce_fls(A, k, args.p)
    except InstanceFormatError as exc:
        raise CliError(f"{args.matrix}: {exc}", EXIT_PARSE) from None
    except (ValueError, DimensionError) as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    except OSError as exc:
        raise CliError(f"{args.matrix}: {exc.strerror or exc}", EXIT_PARSE) from None
    data = instance_to_dict(inst)
    data["k"] = k
    text = json.dumps(data, separators=(",", ":")) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def bench_rows(methods, ns, d: int, m: int, p: int, seed: int, bound: int, mode: str = "uniform-integer"):
    """Yield one CSV row dict per (method, n): the optimum found and the wall time in ms."""
    for n in ns:
        inst = gen_instance(GenSpec(d, n, m, p, bound, seed, mode))
        for method in methods:
            started = time.perf_counter()
            res = solve(inst, method)
            millis = (time.perf_counter() - started) * 1000
            yield {"method": method, "d": d, "n": n, "m": m, "p": p, "seed": seed, "nu": res.nu, "millis": f"{millis:.3f}"}


def cmd_bench(args) -> int:
    methods = [s.strip() for s in args.methods.split(",") if s.strip()]
    try:
        ns = [int(s) for s in args.ns.split(",")]
    except ValueError:
        raise CliError(f"bad --ns list {args.ns!r}", EXIT_PARSE) from None
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=["method", "d", "n", "m", "p", "seed", "nu", "millis"])
        writer.writeheader()
        try:
            for row in bench_rows(methods, ns, args.d, args.m, args.p, _seed(args.seed), args.bound, args.mode):
                writer.writerow(row)
        except IncompatibleMethod as exc:
            raise CliError(str(exc), EXIT_INCOMPATIBLE) from None
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spatialvote", description="Optimal new-candidate placement in spatial elections.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log solver diagnostics to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="find an optimal position")
    s.add_argument("instance")
    s.add_argument("--method", choices=METHODS, default="auto")
    s.add_argument("--objective", choices=OBJECTIVES, default="nu")
    s.add_argument("--scoring", help="scoring matrix JSON; maximise the positional score instead")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eval", help="evaluate a point exactly")
    e.add_argument("instance")
    e.add_argument("--point", required=True, help='comma-separated rationals, e.g. "7/2,0"')
    e.add_argument("--scoring")
    e.set_defaults(func=cmd_eval)

    g = sub.add_parser("gen", help="generate a random instance")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--p", type=int, default=2)
    g.add_argument("--bound", type=int, default=16)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--mode", choices=MODES, default="uniform-integer")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("reduce-fls", help="turn a +-1 matrix and k into an instance")
    r.add_argument("matrix")
    r.add_argument("--p", type=int, default=2)
    r.add_argument("--out")
    r.set_defaults(func=cmd_reduce_fls)

    b = sub.add_parser("bench", help="time solvers on generated instances, CSV output")
    b.add_argument("--methods", default="sweep2d,regions")
    b.add_argument("--ns", default="50,100,200")
    b.add_argument("--d", type=int, default=2)
    b.add_argument("--m", type=int, default=1)
    b.add_argument("--p", type=int, default=2)
    b.add_argument("--bound", type=int, default=1000)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--mode", choices=MODES, default="uniform-integer")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"spatialvote: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
