"""Solvers against a single opponent.

With one incumbent at ``t``, every critical region has ``t`` on its boundary,
so a set of voters can be won together iff the open halfspaces bounded by
their tangent hyperplanes at ``t`` intersect.  The problem becomes: find the
region of a central hyperplane arrangement lying in the most halfspaces.
"""

from __future__ import annotations

import logging
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .election import ElectionInstance, SolveResult, critical_regions, rank_from_voters
from .geometry import ONE, ZERO, Rat, add, as_point, dot, in_open_ball, scale, sub
from .lp import strict_homogeneous_lp

log = logging.getLogger(__name__)


class VerificationError(RuntimeError):
    """An exact post-check of a solver output failed."""


def tangent_normal(offset: Sequence, p: int) -> tuple:
    """Normal ``sign(z_j) |z_j|^(p-1)`` of the lp-ball through the origin centred at ``z``."""
    z = as_point(offset)
    if all(v == 0 for v in z):
        raise ValueError("voter coincides with the opponent; no tangent hyperplane")
    if p == 2:
        return z
    return tuple(v ** (p - 1) if v >= 0 else -((-v) ** (p - 1)) for v in z)


@dataclass(frozen=True)
class CentralArrangement:
    """Tangent hyperplanes at ``anchor`` for the voters that can be won there.

    ``voters[k]`` is the instance index behind ``normals[k]``; voters sitting
    exactly on the anchor have no hyperplane and are left out.
    """

    normals: tuple
    voters: tuple
    offsets: tuple
    anchor: tuple
    p: int
    d: int

    @classmethod
    def from_instance(cls, inst: ElectionInstance, anchor_index: int = 0, subset=None) -> "CentralArrangement":
        anchor = inst.candidates[anchor_index]
        ids = range(inst.n) if subset is None else sorted(subset)
        normals, voters, offsets = [], [], []
        for i in ids:
            z = sub(inst.voters[i], anchor)
            if all(v == 0 for v in z):
                continue
            normals.append(tangent_normal(z, inst.p))
            voters.append(i)
            offsets.append(z)
        return cls(tuple(normals), tuple(voters), tuple(offsets), anchor, inst.p, inst.d)

    def __len__(self) -> int:
        return len(self.normals)

    def positive_set(self, y: Sequence) -> frozenset:
        return frozenset(v for v, nrm in zip(self.voters, self.normals) if dot(nrm, y) > 0)

    def side_counts(self, y: Sequence) -> tuple[int, int, int]:
        """(# normals with n.y > 0, # with n.y < 0, # with n.y == 0)."""
        pos = neg = 0
        for nrm in self.normals:
            s = dot(nrm, y)
            if s > 0:
                pos += 1
            elif s < 0:
                neg += 1
        return pos, neg, len(self.normals) - pos - neg


def region_count_bound(n: int, d: int) -> int:
    """Upper bound on the regions of a central arrangement of n hyperplanes in R^d."""
    from math import comb

    if n == 0:
        return 1
    return 2 * sum(comb(n - 1, j) for j in range(min(n - 1, d - 1) + 1))


def avoiding_direction(normals: Sequence[Sequence], d: int) -> tuple:
    """First vector of a fixed sequence that lies on none of the hyperplanes.

    Tries the unit vectors, then the moment curve ``(1, k, k^2, ...)``; a
    nonzero normal vanishes at most ``d - 1`` points of the curve, so the
    search is finite.
    """
    for j in range(d):
        e = tuple(ONE if i == j else ZERO for i in range(d))
        if all(dot(nrm, e) != 0 for nrm in normals):
            return e
    k = 2
    while True:
        v = tuple(Rat(k) ** i for i in range(d))
        if all(dot(nrm, v) != 0 for nrm in normals):
            return v
        k += 1


def _canonical(normal: Sequence) -> tuple[tuple, int]:
    lead = next(v for v in normal if v != 0)
    return tuple(v / lead for v in normal), (1 if lead > 0 else -1)


@dataclass
class RegionSearch:
    signs: tuple            # +-1 per normal of the arrangement
    witness: tuple          # y with signs[i] * (normals[i] . y) >= 1
    positives: int
    visited: int
    lp_calls: int
    distinct: int           # number of distinct hyperplanes
    edges: list = field(default_factory=list, repr=False)
    regions: list = field(default_factory=list, repr=False)


def enumerate_regions(arr: CentralArrangement, threads: int = 1, keep_regions: bool = False) -> RegionSearch:
    """Breadth-first walk over the regions of the arrangement.

    Neighbours differ in the side of exactly one hyperplane and are tested
    with an exact LP.  Parallel normals are merged first so the flip graph is
    connected (two copies of one hyperplane can never be flipped separately).
    """
    d = arr.d
    if not arr.normals:
        return RegionSearch((), tuple(ONE if j == 0 else ZERO for j in range(d)), 0, 1, 0, 0)

    index: dict = {}
    planes: list = []
    members: list = []
    for i, nrm in enumerate(arr.normals):
        key, orient = _canonical(nrm)
        k = index.get(key)
        if k is None:
            k = index[key] = len(planes)
            planes.append(key)
            members.append([])
        members[k].append((i, orient))
    K = len(planes)
    plus_weight = [sum(1 for _, o in mem if o > 0) for mem in members]
    minus_weight = [len(mem) - w for mem, w in zip(members, plus_weight)]

    def score(sig) -> int:
        return sum(plus_weight[k] if s > 0 else minus_weight[k] for k, s in enumerate(sig))

    def key_of(sig) -> bytes:
        return bytes(1 if s > 0 else 0 for s in sig)

    def feasible(sig):
        rows = [tuple(v if s > 0 else -v for v in planes[k]) for k, s in enumerate(sig)]
        return strict_homogeneous_lp(rows, d)

    y0 = avoiding_direction(planes, d)
    vals = [dot(h, y0) for h in planes]
    sig0 = tuple(1 if v > 0 else -1 for v in vals)
    y0 = scale(y0, ONE / min(abs(v) for v in vals))

    visited: dict = {key_of(sig0): (sig0, y0)}
    infeasible: set = set()
    edges: list = []
    queue = deque([sig0])
    lp_calls = 0
    best_sig, best_score = sig0, score(sig0)
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while queue:
            sig = queue.popleft()
            fresh = []
            for k in range(K):
                nsig = sig[:k] + (-sig[k],) + sig[k + 1:]
                nkey = key_of(nsig)
                if nkey in visited:
                    edges.append((sig, nsig))
                elif nkey not in infeasible:
                    fresh.append((nkey, nsig))
            if pool is not None and len(fresh) > 1:
                results = list(pool.map(lambda item: feasible(item[1]), fresh))
            else:
                results = [feasible(nsig) for _, nsig in fresh]
            lp_calls += len(fresh)
            for (nkey, nsig), y in zip(fresh, results):
                if y is None:
                    infeasible.add(nkey)
                    continue
                if nkey in visited:  # pragma: no cover - keys in `fresh` are unique
                    continue
                visited[nkey] = (nsig, y)
                edges.append((sig, nsig))
                queue.append(nsig)
                sc = score(nsig)
                if sc > best_score:
                    best_sig, best_score = nsig, sc
    finally:
        if pool is not None:
            pool.shutdown()

    def expand(sig):
        out = [0] * len(arr.normals)
        for k, s in enumerate(sig):
            for i, o in members[k]:
                out[i] = s * o
        return tuple(out)

    def normalised(sig, y):
        signs = expand(sig)
        worst = min(s * dot(nrm, y) for s, nrm in zip(signs, arr.normals))
        if worst < 1:
            y = scale(y, ONE / worst)
        return signs, y

    signs, y = normalised(best_sig, visited[key_of(best_sig)][1])
    res = RegionSearch(signs, y, best_score, len(visited), lp_calls, K, edges)
    if keep_regions:
        res.regions = [normalised(s, w) for s, w in visited.values()]
    return res


def _epsilon(z: Sequence, y: Sequence, p: int):
    neg = [j for j in range(len(z)) if z[j] * y[j] < 0]
    if not neg:
        return Rat(1, 2)
    coef = tangent_normal(z, p)
    sigma_plus = dot(coef, y)
    sigma_minus = sum((y[j] * coef[j] for j in neg), ZERO)
    ratio = sigma_plus / abs(sigma_minus)
    den = int(ratio.denominator)
    return Rat(1, 2 ** ((den - 1).bit_length() + p + 1))


def scaling_factor(offsets: Sequence[Sequence], y: Sequence, p: int):
    """Closed-form factor ``lam`` such that ``lam * y`` lies in every ball through 0 centred at ``offsets``."""
    lam = ONE
    for z in offsets:
        eps = _epsilon(z, y, p)
        for zj, yj in zip(z, y):
            if zj != 0 and yj != 0:
                cand = eps * abs(zj / yj)
                if cand < lam:
                    lam = cand
    return lam


def scale_into_balls(inst: ElectionInstance, voters, y: Sequence, anchor_index: int = 0, stats: dict | None = None):
    """Turn a halfspace witness ``y`` (relative to the anchor) into a point inside every ball of ``voters``.

    The closed-form factor is verified exactly; if any membership fails the
    factor is halved until all hold, which terminates because the open
    segment from the anchor towards ``y`` enters every ball.
    """
    anchor = inst.candidates[anchor_index]
    y = as_point(y)
    voters = sorted(voters)
    if not voters:
        return add(anchor, y)
    balls = critical_regions(inst)
    offsets = []
    for i in voters:
        z = sub(inst.voters[i], anchor)
        if all(v == 0 for v in z) or dot(tangent_normal(z, inst.p), y) <= 0:
            raise ValueError(f"y is not strictly inside the tangent halfspace of voter {i}")
        offsets.append(z)
    lam = scaling_factor(offsets, y, inst.p)
    halvings = 0
    while True:
        pt = add(anchor, scale(y, lam))
        if all(in_open_ball(pt, balls[i]) for i in voters):
            break
        halvings += 1
        log.debug("scaling factor %s failed verification; halving", lam)
        lam /= 2
        if halvings > 4096:  # pragma: no cover
            raise VerificationError("scaling never entered the balls")
    if stats is not None:
        stats["halvings"] = stats.get("halvings", 0) + halvings
    return pt


def _finish(inst: ElectionInstance, voters: frozenset, y, method: str, stats: dict, anchor_index: int = 0) -> SolveResult:
    witness = scale_into_balls(inst, voters, y, anchor_index, stats)
    balls = critical_regions(inst)
    won = frozenset(i for i, b in enumerate(balls) if in_open_ball(witness, b))
    if inst.m == 1 and won != voters:
        raise VerificationError(f"{method}: witness wins {sorted(won)} instead of {sorted(voters)}")
    if not voters <= won:
        raise VerificationError(f"{method}: witness misses voters {sorted(voters - won)}")
    return SolveResult(won, witness, len(won), rank_from_voters(inst, won, balls), method, stats)


def _require_single(inst: ElectionInstance) -> None:
    if inst.m != 1:
        raise ValueError("single-opponent solvers need exactly one candidate")


def solve_regions(inst: ElectionInstance, threads: int = 1) -> SolveResult:
    _require_single(inst)
    arr = CentralArrangement.from_instance(inst)
    search = enumerate_regions(arr, threads=threads)
    won = frozenset(v for v, s in zip(arr.voters, search.signs) if s > 0)
    stats = {"regions": search.visited, "lp_calls": search.lp_calls}
    return _finish(inst, won, search.witness, "regions", stats)


@dataclass
class Sweep:
    best: frozenset
    witness: tuple
    regions: int
    points: list = field(default_factory=list, repr=False)


def sweep_arrangement(arr: CentralArrangement, keep_points: bool = False) -> Sweep:
    """Walk once around the origin, counting halfspaces entered and left.

    On the right half-circle ``(1, w)`` with ``w`` falling from +inf to -inf,
    line i is crossed at ``w = c_i = n_1 / -n_2``; on the left half-circle
    ``(-1, w)`` with ``w`` rising, it is crossed at ``-c_i`` -- the same order.
    Coinciding lines are crossed together, so counts are only read between
    distinct crossing values.
    """
    if arr.d != 2:
        raise ValueError("the radial sweep needs d = 2")
    normals = arr.normals
    if not normals:
        return Sweep(frozenset(), (ONE, ZERO), 1)
    crossing = [(n[0] / -n[1], i) for i, n in enumerate(normals) if n[1] != 0]
    crossing.sort(key=lambda t: t[0], reverse=True)
    groups: list = []
    for c, i in crossing:
        if groups and groups[-1][0] == c:
            groups[-1][1].append(i)
        else:
            groups.append((c, [i]))

    def probes(sign):
        # one w per region of a half-circle, in walking order
        if not groups:
            return [ZERO]
        cs = [g[0] for g in groups]
        ws = [cs[0] + 1]
        ws.extend((cs[k] + cs[k + 1]) / 2 for k in range(len(cs) - 1))
        ws.append(cs[-1] - 1)
        return [sign * w for w in ws]

    best_count, best_at = -1, None
    points = []
    for half, x1 in ((0, ONE), (1, -ONE)):
        if half == 0:
            count = sum(1 for n in normals if n[1] > 0 or (n[1] == 0 and n[0] > 0))
        else:
            count = sum(1 for n in normals if n[1] < 0 or (n[1] == 0 and n[0] < 0))
        ws = probes(ONE if half == 0 else -ONE)
        slots = [count]
        for _, members in groups:
            for i in members:
                entering = (normals[i][1] < 0) if half == 0 else (normals[i][1] > 0)
                count += 1 if entering else -1
            slots.append(count)
        for pos, (cnt, w) in enumerate(zip(slots, ws)):
            if keep_points:
                points.append((x1, w))
            if cnt > best_count:
                best_count, best_at = cnt, (x1, w)
    y = best_at
    best = arr.positive_set(y)
    if len(best) != best_count:
        raise VerificationError(f"sweep count {best_count} disagrees with exact evaluation {len(best)}")
    vertical = any(n[1] == 0 for n in normals)
    regions = 2 * (len(groups) + 1) if vertical else max(2 * len(groups), 2)
    return Sweep(best, y, regions, points)


def radial_sweep_2d(inst: ElectionInstance) -> SolveResult:
    """Exact optimum for d = 2, m = 1 in O(n log n)."""
    _require_single(inst)
    if inst.d != 2:
        raise ValueError("the radial sweep needs d = 2")
    arr = CentralArrangement.from_instance(inst)
    sw = sweep_arrangement(arr)
    return _finish(inst, sw.best, sw.witness, "sweep2d", {"regions": sw.regions})


def two_approx(inst: ElectionInstance) -> SolveResult:
    """Better of a generic direction and its negation; at least half the optimum."""
    _require_single(inst)
    arr = CentralArrangement.from_instance(inst)
    t = avoiding_direction(arr.normals, inst.d)
    plus = arr.positive_set(t)
    minus = frozenset(arr.voters) - plus
    if len(minus) > len(plus):
        chosen, y = minus, scale(t, -ONE)
    else:
        chosen, y = plus, t
    return _finish(inst, chosen, y, "approx2", {"direction": [str(v) for v in t]})


def solve_single(inst: ElectionInstance, threads: int = 1) -> SolveResult:
    """Exact optimum for one opponent: radial sweep in the plane, region enumeration otherwise."""
    _require_single(inst)
    if inst.d == 2:
        return radial_sweep_2d(inst)
    return solve_regions(inst, threads=threads)


def region_voter_sets(inst: ElectionInstance, anchor_index: int = 0) -> list[tuple[frozenset, tuple]]:
    """Every region of the tangent arrangement as (won voters, halfspace witness)."""
    arr = CentralArrangement.from_instance(inst, anchor_index)
    if inst.d == 2:
        sw = sweep_arrangement(arr, keep_points=True)
        return [(arr.positive_set(y), y) for y in sw.points]
    search = enumerate_regions(arr, keep_regions=True)
    return [
        (frozenset(v for v, s in zip(arr.voters, signs) if s > 0), y)
        for signs, y in search.regions
    ]
