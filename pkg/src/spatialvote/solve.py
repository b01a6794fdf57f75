"""Method dispatch and the rank objective."""

from __future__ import annotations

from .election import ElectionInstance, BallMultiset, SolveResult, critical_regions, rank_from_voters
from .geometry import in_open_ball
from .multi import m_approx, modified_balls1, modified_balls3
from .oracles import BRUTE_LIMIT, brute_single
from .single import (
    radial_sweep_2d,
    region_voter_sets,
    scale_into_balls,
    solve_regions,
    solve_single,
    two_approx,
)

METHODS = ("auto", "sweep2d", "regions", "balls1", "balls3", "approx2", "approxm", "brute")
OBJECTIVES = ("nu", "rank")


class IncompatibleMethod(ValueError):
    """The requested method cannot handle this instance."""


def check_method(inst: ElectionInstance, method: str) -> None:
    if method not in METHODS:
        raise IncompatibleMethod(f"unknown method {method!r}")
    single_only = {"sweep2d", "regions", "approx2", "brute"}
    if method in single_only and inst.m != 1:
        raise IncompatibleMethod(f"{method} needs exactly one candidate (instance has {inst.m})")
    if method == "sweep2d" and inst.d != 2:
        raise IncompatibleMethod("sweep2d needs d = 2")
    if method in ("balls1", "balls3") and inst.p != 2:
        raise IncompatibleMethod(f"{method} needs p = 2")
    if method == "balls1" and inst.d > 2:
        raise IncompatibleMethod("balls1 needs d <= 2; use balls3")
    if method == "brute" and inst.n > BRUTE_LIMIT:
        raise IncompatibleMethod(f"brute force is limited to {BRUTE_LIMIT} voters")


def resolve_method(inst: ElectionInstance, method: str) -> str:
    check_method(inst, method)
    if method != "auto":
        return method
    if inst.m == 1:
        return "sweep2d" if inst.d == 2 else "regions"
    if inst.p == 2:
        return "balls1" if inst.d <= 2 else "balls3"
    # no exact algorithm for several incumbents under other norms
    return "approxm"


def _best_rank_single(inst: ElectionInstance, method: str) -> SolveResult:
    balls = critical_regions(inst)
    best = None
    for won, y in region_voter_sets(inst):
        key = (rank_from_voters(inst, won, balls), len(won))
        if best is None or key > best[0]:
            best = (key, won, y)
    (_, _), won, y = best
    stats: dict = {"objective": "rank"}
    pt = scale_into_balls(inst, won, y, stats=stats)
    got = frozenset(i for i, b in enumerate(balls) if in_open_ball(pt, b))
    return SolveResult(got, pt, len(got), rank_from_voters(inst, got, balls), method, stats)


def _best_rank_points(inst: ElectionInstance, points, fallback: SolveResult) -> SolveResult:
    balls = critical_regions(inst)
    best_key = (fallback.rank, fallback.nu)
    best = fallback
    for pt in points:
        won = frozenset(i for i, b in enumerate(balls) if in_open_ball(pt, b))
        key = (rank_from_voters(inst, won, balls), len(won))
        if key > best_key:
            best_key = key
            best = SolveResult(won, pt, len(won), key[0], fallback.method, dict(fallback.stats))
    best.stats["objective"] = "rank"
    return best


def solve(inst: ElectionInstance, method: str = "auto", objective: str = "nu", threads: int = 1) -> SolveResult:
    """Run one solver by name; with ``objective="rank"`` maximise incumbents beaten, ties by votes.

    The rank search covers every region for one opponent and every evaluated
    arc witness for the ball solvers; the approximations only score their
    own answer.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")
    name = resolve_method(inst, method)
    if objective == "rank" and name in ("sweep2d", "regions", "brute"):
        return _best_rank_single(inst, name)
    collect = [] if objective == "rank" else None
    if name == "sweep2d":
        res = radial_sweep_2d(inst)
    elif name == "regions":
        res = solve_regions(inst, threads=threads)
    elif name == "balls1":
        res = modified_balls1(inst, collect)
    elif name == "balls3":
        res = modified_balls3(inst, collect)
    elif name == "approx2":
        res = two_approx(inst)
    elif name == "approxm":
        res = m_approx(inst)
    else:
        res = brute_single(inst)
    if collect is not None:
        res = _best_rank_points(inst, collect, res)
    return res


def solve_scoring(ms: BallMultiset, method: str = "auto") -> SolveResult:
    """Maximise a positional score given as a weighted ball multiset (Euclidean only)."""
    if method not in ("auto", "balls1", "balls3"):
        raise IncompatibleMethod("scoring rules are solved with balls1 or balls3")
    if not ms.balls or ms.balls[0].p != 2:
        raise IncompatibleMethod("scoring rules need p = 2")
    d = ms.balls[0].dim
    if method == "balls1" or (method == "auto" and d <= 2):
        if d > 2:
            raise IncompatibleMethod("balls1 needs d <= 2; use balls3")
        return modified_balls1(ms)
    return modified_balls3(ms)


__all__ = ["METHODS", "OBJECTIVES", "IncompatibleMethod", "resolve_method", "solve", "solve_scoring", "solve_single"]
