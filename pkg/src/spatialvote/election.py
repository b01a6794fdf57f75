"""Election instances, critical regions and the vote-count / rank objectives."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .geometry import (
    DimensionError,
    OpenBall,
    RatPoint,
    as_point,
    in_closed_ball,
    in_open_ball,
    lp_dist_pow,
    rat_str,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ElectionInstance:
    """Voters and existing candidates as rational points in R^d under the lp norm."""

    d: int
    p: int
    voters: tuple
    candidates: tuple

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError("dimension d must be a positive integer")
        if int(self.p) != self.p or self.p < 2:
            raise ValueError("norm exponent p must be an integer >= 2")
        voters = tuple(as_point(v) for v in self.voters)
        candidates = tuple(as_point(c) for c in self.candidates)
        if not voters:
            raise ValueError("an election needs at least one voter")
        if not candidates:
            raise ValueError("an election needs at least one candidate")
        for pt in voters + candidates:
            if len(pt) != self.d:
                raise DimensionError(f"point of dimension {len(pt)} in a {self.d}-dimensional instance")
        object.__setattr__(self, "voters", voters)
        object.__setattr__(self, "candidates", candidates)
        shared = set(voters) & set(candidates)
        if shared:
            log.warning("%d voter location(s) coincide with a candidate; those voters are unwinnable", len(shared))

    @property
    def n(self) -> int:
        return len(self.voters)

    @property
    def m(self) -> int:
        return len(self.candidates)


@dataclass(frozen=True)
class ScoringMatrix:
    """Per-voter positional scores ``q[i][j]`` for the j-th closest candidate."""

    q: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.q)
        for i, row in enumerate(rows):
            if any(v < 0 for v in row):
                raise ValueError(f"row {i}: scores must be non-negative")
            if any(row[j] < row[j + 1] for j in range(len(row) - 1)):
                raise ValueError(f"row {i}: scores must be non-increasing")
        object.__setattr__(self, "q", rows)

    @classmethod
    def k_approval(cls, n: int, m: int, k: int) -> "ScoringMatrix":
        return cls(tuple(tuple(1 if j < k else 0 for j in range(m)) for _ in range(n)))

    @classmethod
    def plurality(cls, n: int, m: int) -> "ScoringMatrix":
        return cls.k_approval(n, m, 1)

    @classmethod
    def veto(cls, n: int, m: int) -> "ScoringMatrix":
        return cls.k_approval(n, m, m - 1)

    @classmethod
    def borda(cls, n: int, m: int) -> "ScoringMatrix":
        # 1-indexed rank j scores m - j
        return cls(tuple(tuple(m - 1 - j for j in range(m)) for _ in range(n)))


@dataclass(frozen=True)
class BallMultiset:
    """Balls with positive integer multiplicities; ``owners[k]`` is the voter of ball ``k``."""

    balls: tuple
    multiplicities: tuple
    owners: tuple = ()

    def __post_init__(self):
        if len(self.balls) != len(self.multiplicities):
            raise ValueError("one multiplicity per ball")
        if any(int(k) != k or k < 1 for k in self.multiplicities):
            raise ValueError("multiplicities must be positive integers")
        if self.balls:
            d, p = self.balls[0].dim, self.balls[0].p
            if any(b.dim != d or b.p != p for b in self.balls):
                raise ValueError("all balls must share dimension and norm")
        if not self.owners:
            object.__setattr__(self, "owners", tuple(range(len(self.balls))))

    def __len__(self) -> int:
        return len(self.balls)

    def score(self, pt: Sequence) -> int:
        return sum(k for b, k in zip(self.balls, self.multiplicities) if in_open_ball(pt, b))

    def members(self, pt: Sequence) -> frozenset:
        return frozenset(i for i, b in enumerate(self.balls) if in_open_ball(pt, b))

    def as_counter(self) -> dict:
        out: dict = {}
        for b, k in zip(self.balls, self.multiplicities):
            out[b] = out.get(b, 0) + k
        return out


@dataclass
class SolveResult:
    """Outcome of a solver: the won voters (or ball indices) and an exact witness point."""

    voters: frozenset
    witness: RatPoint
    nu: int
    rank: int | None = None
    method: str = ""
    stats: dict = field(default_factory=dict)

    def as_json(self) -> dict:
        return {
            "method": self.method,
            "nu": self.nu,
            "rank": self.rank,
            "witness": [rat_str(x) for x in self.witness],
            "voters": sorted(self.voters),
            "stats": dict(self.stats),
        }


def critical_regions(inst: ElectionInstance) -> list[OpenBall]:
    """Ball i: centred at voter i, radius = distance to the nearest candidate."""
    out = []
    for x in inst.voters:
        r = min(lp_dist_pow(x, t, inst.p) for t in inst.candidates)
        out.append(OpenBall(x, r, inst.p))
    return out


def won_voters(inst: ElectionInstance, t: Sequence, balls=None) -> frozenset:
    t = as_point(t)
    if len(t) != inst.d:
        raise DimensionError(f"point of dimension {len(t)} in a {inst.d}-dimensional instance")
    balls = balls if balls is not None else critical_regions(inst)
    return frozenset(i for i, b in enumerate(balls) if in_open_ball(t, b))


def eval_nu(inst: ElectionInstance, t: Sequence, balls=None) -> tuple[int, frozenset]:
    """Votes a newcomer at ``t`` receives; ties go to the incumbents."""
    won = won_voters(inst, t, balls)
    return len(won), won


def rank_from_voters(inst: ElectionInstance, won: frozenset, balls=None) -> int:
    balls = balls if balls is not None else critical_regions(inst)
    nu = len(won)
    beaten = 0
    for tj in inst.candidates:
        kept = sum(1 for i, b in enumerate(balls) if i not in won and in_closed_ball(tj, b))
        if kept < nu:
            beaten += 1
    return beaten


def eval_rank(inst: ElectionInstance, t: Sequence, balls=None) -> int:
    """Number of incumbents left with strictly fewer votes than the newcomer at ``t``.

    An incumbent j keeps every remaining voter whose closed critical ball
    contains ``t_j``; voters equidistant to several incumbents count for each.
    """
    balls = balls if balls is not None else critical_regions(inst)
    return rank_from_voters(inst, won_voters(inst, t, balls), balls)


def scoring_balls(inst: ElectionInstance, q: ScoringMatrix) -> BallMultiset:
    """Nested-ball arrangement whose weighted membership count is the positional score.

    For voter i and rank position j there are ``q[i][j] - q[i][j+1]`` copies
    of the ball through the j-th closest candidate.  Equidistant candidates
    are ranked by index.
    """
    if len(q.q) != inst.n or any(len(row) != inst.m for row in q.q):
        raise ValueError(f"scoring matrix must be {inst.n}x{inst.m}")
    balls, mult, owners = [], [], []
    for i, x in enumerate(inst.voters):
        dists = sorted((lp_dist_pow(x, t, inst.p), k) for k, t in enumerate(inst.candidates))
        row = q.q[i]
        for j in range(inst.m):
            inc = row[j] - (row[j + 1] if j + 1 < inst.m else 0)
            if inc > 0:
                balls.append(OpenBall(x, dists[j][0], inst.p))
                mult.append(inc)
                owners.append(i)
    return BallMultiset(tuple(balls), tuple(mult), tuple(owners))


def plurality_multiset(inst: ElectionInstance) -> BallMultiset:
    balls = critical_regions(inst)
    return BallMultiset(tuple(balls), (1,) * len(balls))


def reduce_fls(A: Sequence[Sequence[int]], k: int, p: int = 2) -> tuple[ElectionInstance, int]:
    """Map a bipolar max-feasible-subsystem instance to candidate positioning.

    One candidate at the origin, voter i at row i of A.  For +-1 coordinates
    the tangent hyperplanes coincide for every p, so any p >= 2 works.
    """
    rows = [tuple(int(v) for v in row) for row in A]
    if not rows:
        raise ValueError("matrix must have at least one row")
    width = len(rows[0])
    for r in rows:
        if len(r) != width:
            raise DimensionError("ragged matrix")
        if any(v not in (-1, 1) for v in r):
            raise ValueError("FLS matrix entries must be -1 or +1")
    inst = ElectionInstance(width, p, tuple(rows), ((0,) * width,))
    return inst, int(k)
