"""Brute-force and sampling oracles, plus seeded instance generation.

These deliberately avoid the solver code paths: ``brute_single`` tries
voter subsets directly with the LP primitive, ``fls_brute`` scans an
integer grid, and ``sample_lower_bound`` only ever evaluates points.
"""

from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .election import ElectionInstance, SolveResult, BallMultiset, critical_regions, rank_from_voters
from .geometry import ONE, Rat, add, dot, in_open_ball, norm2, scale, sub
from .lp import strict_homogeneous_lp

MODES = ("uniform-integer", "bipolar", "clustered")
BRUTE_LIMIT = 20


@dataclass(frozen=True)
class GenSpec:
    d: int
    n: int
    m: int = 1
    p: int = 2
    bound: int = 16
    seed: int = 0
    mode: str = "uniform-integer"

    def __post_init__(self):
        if min(self.d, self.n, self.m) < 1:
            raise ValueError("d, n and m must be positive")
        if self.p < 2:
            raise ValueError("p must be at least 2")
        if self.bound < 1:
            raise ValueError("coordinate bound must be at least 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {', '.join(MODES)}")


def gen_instance(spec: GenSpec) -> ElectionInstance:
    """Reproducible random instance; voters never sit on a candidate except in bipolar mode."""
    rng = random.Random(spec.seed)
    B = spec.bound

    def point():
        return tuple(rng.randint(-B, B) for _ in range(spec.d))

    if spec.mode == "bipolar":
        cands = [(0,) * spec.d] + [point() for _ in range(spec.m - 1)]
        voters = [tuple(rng.choice((-1, 1)) for _ in range(spec.d)) for _ in range(spec.n)]
        return ElectionInstance(spec.d, spec.p, tuple(voters), tuple(cands))

    cands = [point() for _ in range(spec.m)]
    taken = set(cands)
    if spec.mode == "clustered":
        centres = [point() for _ in range(min(3, spec.n))]
        spread = max(1, B // 4)

    def voter():
        if spec.mode == "uniform-integer":
            return point()
        c = rng.choice(centres)
        return tuple(max(-B, min(B, v + rng.randint(-spread, spread))) for v in c)

    voters = []
    for _ in range(spec.n):
        v = voter()
        for _ in range(1000):
            if v not in taken:
                break
            v = voter()
        else:
            raise ValueError("could not place a voter off the candidates; widen the bound")
        voters.append(v)
    return ElectionInstance(spec.d, spec.p, tuple(voters), tuple(cands))


def _tangent(z, p):
    return tuple(v ** (p - 1) if v >= 0 else -((-v) ** (p - 1)) for v in z)


def brute_single(inst: ElectionInstance) -> SolveResult:
    """Largest voter subset whose tangent halfspaces share a point, by trying subsets in decreasing size."""
    if inst.m != 1:
        raise ValueError("brute_single needs exactly one candidate")
    t = inst.candidates[0]
    offs = {i: sub(x, t) for i, x in enumerate(inst.voters)}
    winnable = [i for i, z in offs.items() if any(v != 0 for v in z)]
    if len(winnable) > BRUTE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTE_LIMIT} winnable voters")
    balls = critical_regions(inst)
    groups: dict = {}  # identical normals share one row; weight = how many voters share it
    for i in winnable:
        groups.setdefault(_tangent(offs[i], inst.p), []).append(i)
    rows = list(groups)
    subsets = []
    for mask in range(1, 1 << len(rows)):
        chosen = [rows[k] for k in range(len(rows)) if mask >> k & 1]
        subsets.append((-sum(len(groups[r]) for r in chosen), mask, chosen))
    subsets.sort(key=lambda s: (s[0], s[1]))
    for _, _, chosen in subsets:
        y = strict_homogeneous_lp(chosen, inst.d)
        if y is None:
            continue
        S = [i for r in chosen for i in groups[r]]
        lam = ONE
        while True:
            pt = add(t, scale(y, lam))
            if all(in_open_ball(pt, balls[i]) for i in S):
                break
            lam /= 2
        won = frozenset(i for i, b in enumerate(balls) if in_open_ball(pt, b))
        return SolveResult(won, pt, len(won), rank_from_voters(inst, won, balls), "brute", {})
    pt = inst.candidates[0]
    return SolveResult(frozenset(), pt, 0, rank_from_voters(inst, frozenset(), balls), "brute", {})


@lru_cache(maxsize=None)
def _bipolar_patterns(width: int) -> tuple[frozenset, ...]:
    """Distinct sets of +-1 rows made positive by some grid point of [-6, 6]^width."""
    rows = list(product((-1, 1), repeat=width))
    seen = set()
    for y in product(range(-6, 7), repeat=width):
        if any(y):
            seen.add(frozenset(r for r in rows if sum(a * b for a, b in zip(r, y)) > 0))
    return tuple(seen)


def fls_brute(A: Sequence[Sequence[int]], k: int) -> tuple[bool, int]:
    """Decide whether at least k rows of a +-1 matrix admit a common strict solution.

    Returns (answer, best row count).  With at most three columns every
    region of the row-hyperplane arrangement has at most four walls, and its
    extreme rays are cross products of +-1 vectors, i.e. have entries in
    {0, +-1}; their sum is an interior integer point with entries at most 4.
    Scanning the integer box [-6, 6]^width therefore reaches every region.
    """
    rows = [tuple(int(v) for v in r) for r in A]
    width = len(rows[0])
    if width > 3:
        raise ValueError("grid oracle only covers up to three columns")
    best = max(sum(1 for r in rows if r in pat) for pat in _bipolar_patterns(width))
    return best >= k, best


def radical_feet(balls: Sequence) -> list[tuple]:
    """Where the radical hyperplane of each pair crosses the line of centres."""
    out = []
    for b1, b2 in combinations(balls, 2):
        if b1.center == b2.center:
            continue
        a = scale(sub(b2.center, b1.center), 2)
        off = (norm2(b2.center) - b2.radius_pow) - (norm2(b1.center) - b1.radius_pow)
        lam = (off - dot(a, b1.center)) / norm2(a)
        out.append(add(b1.center, scale(a, lam)))
    return out


def _solve_exact(M, rhs):
    n = len(M)
    A = [list(row) + [r] for row, r in zip(M, rhs)]
    for c in range(n):
        piv = next((k for k in range(c, n) if A[k][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        for k in range(n):
            if k != c and A[k][c] != 0:
                f = A[k][c] / A[c][c]
                A[k] = [a - f * b for a, b in zip(A[k], A[c])]
    return [A[k][n] / A[k][k] for k in range(n)]


def radical_centres(balls: Sequence, max_size: int) -> list[tuple]:
    """Equal-power points of 3..max_size balls inside the affine hull of their centres."""
    out = []
    for size in range(3, max_size + 1):
        for group in combinations(balls, size):
            c0 = group[0].center
            dirs = [sub(b.center, c0) for b in group[1:]]
            # x = c0 + sum alpha_k dirs_k with 2 dirs_k . x = |c_k|^2 - r_k^2 - |c0|^2 + r0^2
            rhs = [
                (norm2(b.center) - b.radius_pow - norm2(c0) + group[0].radius_pow) / 2 - dot(u, c0)
                for b, u in zip(group[1:], dirs)
            ]
            M = [[dot(u, v) for v in dirs] for u in dirs]
            alpha = _solve_exact(M, rhs)
            if alpha is None:
                continue
            pt = c0
            for a, u in zip(alpha, dirs):
                pt = add(pt, scale(u, a))
            out.append(pt)
    return out


def sample_lower_bound(balls: BallMultiset, probes: int = 100_000, seed: int = 0, verify_top: int = 64):
    """Best exact score over a probe set: returns (score, point).

    Probes are every centre, every pairwise radical foot and the radical
    centres of up to d + 1 balls (Euclidean balls only), and ``probes``
    random rationals with denominator 2^16 in the bounding box.
    Random probes are ranked in floating point and only the leading ones are
    checked exactly, so the result is always a true lower bound.
    """
    if probes < 1:
        raise ValueError("need at least one probe")
    if not balls.balls:
        return 0, ()
    d = balls.balls[0].dim
    p = balls.balls[0].p
    fixed = [b.center for b in balls.balls]
    if p == 2:
        fixed.extend(radical_feet(balls.balls))
        distinct = list(dict.fromkeys(balls.balls))
        if len(distinct) <= 12:
            fixed.extend(radical_centres(distinct, min(d + 1, 4)))

    best_score, best_pt = -1, None

    def exact(pt):
        nonlocal best_score, best_pt
        s = balls.score(pt)
        if s > best_score:
            best_score, best_pt = s, pt

    for pt in fixed:
        exact(pt)

    centres = np.array([[float(v) for v in b.center] for b in balls.balls])
    radii = np.array([float(b.radius_pow) ** (1.0 / p) for b in balls.balls])
    weights = np.array(balls.multiplicities, dtype=float)
    lo = np.floor((centres - radii[:, None]).min(axis=0))
    hi = np.ceil((centres + radii[:, None]).max(axis=0))
    rng = np.random.default_rng(seed)
    den = 1 << 16
    span = ((hi - lo) * den).astype(np.int64)
    nums = rng.integers(0, span + 1, size=(probes, d)) + (lo * den).astype(np.int64)
    pts = nums / den
    score = np.zeros(probes)
    chunk = 8192
    for s in range(0, probes, chunk):
        block = pts[s:s + chunk]
        dist = (np.abs(block[:, None, :] - centres[None, :, :]) ** p).sum(axis=2)
        inside = dist < (radii ** p)[None, :]
        score[s:s + chunk] = inside @ weights
    top = np.argsort(-score, kind="stable")[:verify_top]
    for idx in top:
        exact(tuple(Rat(int(v), den) for v in nums[idx]))
    return best_score, best_pt
