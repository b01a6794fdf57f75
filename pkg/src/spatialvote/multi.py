"""Euclidean solvers for several incumbents.

The new candidate must land in as many open balls as possible.  In the plane
every optimal region has an arc of some circle on its boundary, so sweeping
each circle past the points where other circles cross it finds the optimum
(``modified_balls1``).  In higher dimensions two spheres of an optimal set
meet inside the region, so the problem recurses onto their radical
hyperplane, where every ball becomes a lower-dimensional ball with rational
centre and squared radius (``modified_balls3``).
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Sequence

from .election import (
    BallMultiset,
    ElectionInstance,
    SolveResult,
    critical_regions,
    rank_from_voters,
)
from .geometry import (
    ONE,
    ZERO,
    DimensionError,
    Hyperplane,
    OpenBall,
    Rat,
    add,
    dot,
    in_closed_ball,
    in_open_ball,
    norm2,
    scale,
    sub,
)
from .quadext import BiQuadExt, QuadExt, quadext_sign, rational_sqrt, sqrt_bounds
from .single import VerificationError, solve_single

log = logging.getLogger(__name__)


class Nesting(enum.Enum):
    DISJOINT = "disjoint"
    PROPER_INTERSECT = "proper_intersect"
    B1_INSIDE_B2 = "b1_inside_b2"
    B2_INSIDE_B1 = "b2_inside_b1"
    EQUAL = "equal"


def _require_euclidean(*balls: OpenBall) -> None:
    for b in balls:
        if b.p != 2:
            raise ValueError("multi-candidate ball solvers need p = 2")


def nesting_predicate(b1: OpenBall, b2: OpenBall) -> Nesting:
    """Classify two open Euclidean balls using rational arithmetic only.

    With ``s = |c1 - c2|^2 - r1^2 - r2^2`` the balls are disjoint iff
    ``s >= 2 r1 r2`` and nested iff ``s <= -2 r1 r2``; both reduce to
    comparing ``s^2`` with ``4 r1^2 r2^2`` once the sign of ``s`` is known.
    Touching from outside counts as disjoint, touching from inside as nested.
    """
    _require_euclidean(b1, b2)
    if b1.dim != b2.dim:
        raise DimensionError("balls of different dimension")
    dist = norm2(sub(b1.center, b2.center))
    r1, r2 = b1.radius_pow, b2.radius_pow
    if dist == 0 and r1 == r2:
        return Nesting.EQUAL
    s = dist - r1 - r2
    if s * s >= 4 * r1 * r2:
        if s >= 0:
            return Nesting.DISJOINT
        return Nesting.B1_INSIDE_B2 if r1 < r2 else Nesting.B2_INSIDE_B1
    return Nesting.PROPER_INTERSECT


def _radical(b1: OpenBall, b2: OpenBall):
    a = scale(sub(b2.center, b1.center), 2)
    b = (norm2(b2.center) - b2.radius_pow) - (norm2(b1.center) - b1.radius_pow)
    return a, b


def radical_hyperplane(b1: OpenBall, b2: OpenBall):
    """Hyperplane through the common boundary points of two spheres, or None if they do not meet."""
    rel = nesting_predicate(b1, b2)
    if rel is Nesting.EQUAL:
        raise ValueError("concentric equal balls have no radical hyperplane")
    if rel is not Nesting.PROPER_INTERSECT:
        dist = norm2(sub(b1.center, b2.center))
        s = dist - b1.radius_pow - b2.radius_pow
        if dist == 0 or s * s != 4 * b1.radius_pow * b2.radius_pow:
            return None
    a, b = _radical(b1, b2)
    return Hyperplane(a, b)


def complement_basis(normals: Sequence[Sequence], d: int) -> list[tuple]:
    """Exact basis of the vectors orthogonal to every normal."""
    rows = [list(map(Rat, r)) for r in normals]
    pivots = []
    r = 0
    for col in range(d):
        piv = next((k for k in range(r, len(rows)) if rows[k][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ONE / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][col] != 0:
                f = rows[k][col]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(d) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * d
        v[fc] = ONE
        for k, pc in enumerate(pivots):
            v[pc] = -rows[k][fc]
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class BallArrangement:
    """Weighted open balls, all centred on the affine subspace cut out by ``subspace``.

    ``members[k]`` lists the top-level balls that ball ``k`` stands for; it
    has several entries after identical balls are merged.
    """

    balls: tuple
    weights: tuple
    members: tuple
    d: int
    subspace: tuple = ()

    @classmethod
    def from_multiset(cls, ms: BallMultiset) -> "BallArrangement":
        if not ms.balls:
            raise ValueError("empty ball multiset")
        _require_euclidean(*ms.balls)
        return cls(ms.balls, ms.multiplicities, tuple(frozenset([k]) for k in range(len(ms))), ms.balls[0].dim)

    @classmethod
    def from_balls(cls, balls: Sequence[OpenBall], weights=None) -> "BallArrangement":
        balls = tuple(balls)
        weights = tuple(weights) if weights is not None else (1,) * len(balls)
        return cls.from_multiset(BallMultiset(balls, weights))

    @property
    def dim(self) -> int:
        return self.d - len(self.subspace)

    def merged(self) -> "BallArrangement":
        """Drop empty balls and fuse identical ones, adding their weights."""
        order: dict = {}
        for b, w, mem in zip(self.balls, self.weights, self.members):
            if b.radius_pow <= 0:
                continue
            key = (b.center, b.radius_pow)
            if key in order:
                ow, om = order[key][1], order[key][2]
                order[key] = (b, ow + w, om | mem)
            else:
                order[key] = (b, w, mem)
        vals = list(order.values())
        return BallArrangement(
            tuple(v[0] for v in vals), tuple(v[1] for v in vals), tuple(v[2] for v in vals), self.d, self.subspace
        )

    def score(self, pt: Sequence) -> int:
        return sum(w for b, w in zip(self.balls, self.weights) if in_open_ball(pt, b))

    def project(self, h: Hyperplane) -> "BallArrangement":
        """Intersect every ball with ``h``; balls missing or only touching ``h`` are dropped."""
        a, b = h.coeffs, h.offset
        a2 = norm2(a)
        balls, weights, members = [], [], []
        for ball, w, mem in zip(self.balls, self.weights, self.members):
            g = b - dot(a, ball.center)
            rho = ball.radius_pow - g * g / a2
            if rho <= 0:
                continue
            balls.append(OpenBall(add(ball.center, scale(a, g / a2)), rho, 2))
            weights.append(w)
            members.append(mem)
        return BallArrangement(tuple(balls), tuple(weights), tuple(members), self.d, self.subspace + (h,)).merged()


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


@dataclass
class _Event:
    ax: Rat  # frame coordinates: (ax + bx sqrt D, ay + by sqrt D)
    bx: Rat
    ay: Rat
    by: Rat
    D: Rat
    partner: int
    entering: bool
    foot: tuple
    sign: int
    w: tuple
    upper: bool = False
    root: Rat | None = None  # exact sqrt(D) when D is a rational square


def _fold(ev: _Event) -> None:
    root = rational_sqrt(ev.D)
    if root is not None:
        ev.root = root
        ev.ax, ev.ay = ev.ax + ev.bx * root, ev.ay + ev.by * root
        ev.bx = ev.by = ZERO
        ev.D = ZERO
    sy = quadext_sign(QuadExt(ev.ay, ev.by, ev.D))
    sx = quadext_sign(QuadExt(ev.ax, ev.bx, ev.D))
    ev.upper = sy > 0 or (sy == 0 and sx > 0)


def _angle_cmp(p: _Event, q: _Event) -> int:
    if p.upper != q.upper:
        return -1 if p.upper else 1
    cross = BiQuadExt(
        p.ax * q.ay - p.ay * q.ax,
        p.bx * q.ay - p.by * q.ax,
        p.ax * q.by - p.ay * q.bx,
        p.bx * q.by - p.by * q.bx,
        p.D,
        q.D,
    )
    return -quadext_sign(cross)


def _approx_point(ev: _Event, bits: int):
    if ev.root is not None:
        s = ev.root
    else:
        s, _ = sqrt_bounds(ev.D, bits)
    return add(ev.foot, scale(ev.w, ev.sign * s))


class _Search:
    """Shared state of one solve: running best, optional candidate collection, counters."""

    def __init__(self, collect: list | None):
        self.collect = collect
        self.stats = {"circles": 0, "branches": 0, "pruned": 0, "refinements": 0}


def _plane_basis(arr: BallArrangement):
    if not arr.subspace:
        if arr.d != 2:
            raise ValueError("the circle sweep needs a 2-dimensional arrangement")
        return (ONE, ZERO), (ZERO, ONE)
    basis = complement_basis([h.coeffs for h in arr.subspace], arr.d)
    if len(basis) != 2:
        raise ValueError("the circle sweep needs a 2-dimensional affine subspace")
    return basis[0], basis[1]


def _segment_witness(arr, bi, ev_a, ev_b, target, search, limit_bits: int = 8192):
    bits = 32
    while bits <= limit_bits:
        m = scale(add(_approx_point(ev_a, bits), _approx_point(ev_b, bits)), Rat(1, 2))
        if in_open_ball(m, bi) and arr.score(m) >= target:
            return m
        search.stats["refinements"] += 1
        bits *= 2
    raise VerificationError("arc witness did not converge")


def _balls1(arr: BallArrangement, search: _Search):
    """Best (weight, point) over a planar arrangement, or None when it has no balls."""
    balls, wts = arr.balls, arr.weights
    if not balls:
        return None
    e1, e2 = _plane_basis(arr)
    best_w, best_pt = -1, None

    def consider(pt):
        nonlocal best_w, best_pt
        if search.collect is not None:
            search.collect.append(pt)
        w = arr.score(pt)
        if w > best_w:
            best_w, best_pt = w, pt

    for i, bi in enumerate(balls):
        search.stats["circles"] += 1
        ci, ri = bi.center, bi.radius_pow
        base = 0
        events: list[_Event] = []
        for k, bk in enumerate(balls):
            if k == i:
                continue
            rel = nesting_predicate(bi, bk)
            if rel is Nesting.B1_INSIDE_B2:
                base += wts[k]
            elif rel is Nesting.PROPER_INTERSECT:
                a, b = _radical(bi, bk)
                a2 = norm2(a)
                g = b - dot(a, ci)
                lam = g / a2
                foot = add(ci, scale(a, lam))
                w = sub(scale(e1, dot(a, e2)), scale(e2, dot(a, e1)))
                D = (ri - g * g / a2) / norm2(w)
                af = (dot(a, e1), dot(a, e2))
                wf = (dot(w, e1), dot(w, e2))
                enter_minus = _cross(af, wf) > 0
                for sgn in (-1, 1):
                    ev = _Event(
                        lam * af[0], sgn * wf[0], lam * af[1], sgn * wf[1], D,
                        k, (sgn < 0) == enter_minus, foot, sgn, w,
                    )
                    _fold(ev)
                    events.append(ev)
        own = wts[i] + base
        if not events:
            consider(ci)
            continue
        events.sort(key=cmp_to_key(_angle_cmp))
        groups: list[list[_Event]] = []
        for ev in events:
            if groups and _angle_cmp(groups[-1][0], ev) == 0:
                groups[-1].append(ev)
            else:
                groups.append([ev])
        where_enter, where_exit = {}, {}
        for gi, grp in enumerate(groups):
            for ev in grp:
                (where_enter if ev.entering else where_exit)[ev.partner] = gi
        running = sum(wts[k] for k in where_enter if where_exit[k] < where_enter[k])
        totals = []
        for grp in groups:
            for ev in grp:
                running += wts[ev.partner] if ev.entering else -wts[ev.partner]
            totals.append(own + running)
        G = len(groups)
        if search.collect is not None:
            order = range(G)
        else:
            top = max(totals)
            if top <= best_w:
                continue
            order = [totals.index(top)]
        for gi in order:
            pt = _segment_witness(arr, bi, groups[gi][0], groups[(gi + 1) % G][0], totals[gi], search)
            consider(pt)
    return best_w, best_pt


def _balls3(arr: BallArrangement, search: _Search):
    if arr.dim <= 2:
        return _balls1(arr, search)
    balls = arr.balls
    if not balls:
        return None
    contain_w, contain_pt = -1, None
    for i, bi in enumerate(balls):
        pt = bi.center
        if search.collect is not None:
            search.collect.append(pt)
        w = arr.score(pt)
        if w > contain_w:
            contain_w, contain_pt = w, pt
    hyper_w, hyper_pt = -1, None
    for i in range(len(balls)):
        for k in range(i + 1, len(balls)):
            if nesting_predicate(balls[i], balls[k]) is not Nesting.PROPER_INTERSECT:
                continue
            a, b = _radical(balls[i], balls[k])
            sub_arr = arr.project(Hyperplane(a, b))
            bound = sum(sub_arr.weights)
            if search.collect is None and (bound <= hyper_w or bound < contain_w):
                search.stats["pruned"] += 1
                continue
            search.stats["branches"] += 1
            res = _balls3(sub_arr, search)
            if res is None:
                continue
            w = arr.score(res[1])
            if w > hyper_w:
                hyper_w, hyper_pt = w, res[1]
    # equal counts favour the hyperplane branch
    if hyper_pt is not None and hyper_w >= contain_w:
        return hyper_w, hyper_pt
    return contain_w, contain_pt


def _prepare(target):
    """Normalise the input to (arrangement, inst or multiset, lifted-from-1d flag)."""
    if isinstance(target, ElectionInstance):
        if target.p != 2:
            raise ValueError("multi-candidate ball solvers need p = 2")
        ms = BallMultiset(tuple(critical_regions(target)), (1,) * target.n)
        source = target
    elif isinstance(target, BallMultiset):
        ms = target
        source = target
    elif isinstance(target, BallArrangement):
        return target.merged(), target, False
    else:
        raise TypeError(f"cannot solve {type(target).__name__}")
    lifted = False
    if ms.balls and ms.balls[0].dim == 1:
        ms = BallMultiset(
            tuple(OpenBall(b.center + (ZERO,), b.radius_pow, b.p) for b in ms.balls), ms.multiplicities, ms.owners
        )
        lifted = True
    return BallArrangement.from_multiset(ms).merged(), source, lifted


def _result(source, point, method: str, stats: dict) -> SolveResult:
    if isinstance(source, ElectionInstance):
        balls = critical_regions(source)
        won = frozenset(i for i, b in enumerate(balls) if in_open_ball(point, b))
        return SolveResult(won, point, len(won), rank_from_voters(source, won, balls), method, stats)
    if isinstance(source, BallMultiset):
        won = source.members(point)
        return SolveResult(won, point, source.score(point), None, method, stats)
    won = frozenset().union(*(m for b, m in zip(source.balls, source.members) if in_open_ball(point, b)))
    return SolveResult(won, point, source.score(point), None, method, stats)


def _run(target, solver, method: str, collect: list | None) -> SolveResult:
    arr, source, lifted = _prepare(target)
    search = _Search(collect)
    res = solver(arr, search) if arr.balls else None
    dim = arr.d - (1 if lifted else 0)
    if res is None:
        if isinstance(source, ElectionInstance):
            point = source.candidates[0]
        else:
            point = tuple(ZERO for _ in range(dim))
        return _result(source, point, method, search.stats)
    weight, point = res
    if lifted:
        point = point[:1]
        if collect is not None:
            collect[:] = [p[:1] for p in collect]
    out = _result(source, point, method, search.stats)
    if out.nu < weight:
        raise VerificationError(f"{method}: witness scores {out.nu}, expected {weight}")
    return out


def modified_balls1(target, collect: list | None = None) -> SolveResult:
    """Exact optimum for Euclidean balls in the plane (or on a line)."""
    arr, _, _ = _prepare(target)
    if arr.dim > 2:
        raise ValueError("balls1 handles 1- and 2-dimensional inputs; use balls3")
    return _run(target, _balls1, "balls1", collect)


def modified_balls3(target, collect: list | None = None) -> SolveResult:
    """Exact optimum for Euclidean balls in any dimension by radical-hyperplane recursion."""
    return _run(target, _balls3, "balls3", collect)


def m_approx(inst: ElectionInstance) -> SolveResult:
    """Best single-opponent answer over the incumbents; within a factor m of optimal.

    Voters whose closed critical region touches incumbent j all have j as a
    nearest candidate, so treating j as their sole opponent keeps their true
    balls and the tangent-hyperplane solver applies at ``t_j``.
    """
    balls = critical_regions(inst)
    best = None
    for j, tj in enumerate(inst.candidates):
        group = [i for i, b in enumerate(balls) if not b.is_empty and in_closed_ball(tj, b)]
        if not group:
            continue
        sub_inst = ElectionInstance(inst.d, inst.p, tuple(inst.voters[i] for i in group), (tj,))
        res = solve_single(sub_inst)
        won = frozenset(i for i, b in enumerate(balls) if in_open_ball(res.witness, b))
        if best is None or len(won) > len(best[0]):
            best = (won, res.witness, j)
    if best is None:
        return SolveResult(frozenset(), inst.candidates[0], 0, rank_from_voters(inst, frozenset(), balls), "approxm", {})
    won, pt, j = best
    return SolveResult(won, pt, len(won), rank_from_voters(inst, won, balls), "approxm", {"anchor": j})
