import random
from math import ceil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spatialvote.election import ElectionInstance, critical_regions, eval_nu
from spatialvote.geometry import Rat, in_open_ball
from spatialvote.oracles import brute_single
from spatialvote.single import (
    CentralArrangement,
    avoiding_direction,
    enumerate_regions,
    radial_sweep_2d,
    region_count_bound,
    region_voter_sets,
    scale_into_balls,
    scaling_factor,
    solve_regions,
    solve_single,
    tangent_normal,
    two_approx,
)

from conftest import random_instance


def test_tangent_normal_examples():
    assert tangent_normal((1, 1), 2) == (1, 1)
    assert tangent_normal((2, -1), 3) == (4, -1)
    for p in (2, 3, 4, 7):
        assert tangent_normal((-1, 1, 1), p) == (-1, 1, 1)
    with pytest.raises(ValueError):
        tangent_normal((0, 0), 2)


def arrangement(voters, opponent=None, p=2):
    d = len(voters[0])
    opponent = opponent or (0,) * d
    return CentralArrangement.from_instance(ElectionInstance(d, p, voters, [opponent]))


def test_single_hyperplane():
    res = enumerate_regions(arrangement([(3, 1)]))
    assert res.positives == 1 and res.visited == 2


def test_three_lines_six_regions():
    res = enumerate_regions(arrangement([(1, 0), (0, 1), (1, 1)]))
    assert res.visited == 6 == region_count_bound(3, 2)
    assert res.positives == 3


def test_region_witness_satisfies_signs():
    rng = random.Random(2)
    for _ in range(30):
        inst = random_instance(rng, 3, 7, p=3)
        arr = CentralArrangement.from_instance(inst)
        res = enumerate_regions(arr, keep_regions=True)
        for signs, y in res.regions + [(res.signs, res.witness)]:
            assert all(s * sum(a * b for a, b in zip(n, y)) >= 1 for s, n in zip(signs, arr.normals))


def test_adjacent_regions_differ_in_one_hyperplane():
    rng = random.Random(4)
    for _ in range(10):
        res = enumerate_regions(CentralArrangement.from_instance(random_instance(rng, 3, 6)))
        assert res.edges
        for a, b in res.edges:
            assert sum(x != y for x, y in zip(a, b)) == 1


def test_parallel_normals_still_reach_every_region():
    # two voters on one ray and one opposite share a hyperplane
    res = enumerate_regions(arrangement([(1, 1), (2, 2), (-1, -1), (1, -1)]))
    assert res.distinct == 2 and res.visited == 4
    assert res.positives == 3


def test_threads_give_same_answer():
    inst = random_instance(random.Random(8), 3, 9)
    arr = CentralArrangement.from_instance(inst)
    a, b = enumerate_regions(arr), enumerate_regions(arr, threads=4)
    assert (a.positives, a.visited) == (b.positives, b.visited)


def test_sweep_examples():
    same = ElectionInstance(2, 2, [(1, 1)] * 4, [(0, 0)])
    assert radial_sweep_2d(same).nu == 4
    anti = ElectionInstance(2, 2, [(1, 0), (-1, 0)], [(0, 0)])
    assert radial_sweep_2d(anti).nu == 1
    with pytest.raises(ValueError):
        radial_sweep_2d(ElectionInstance(3, 2, [(1, 0, 0)], [(0, 0, 0)]))


def test_sweep_matches_regions_and_brute():
    rng = random.Random(11)
    for _ in range(120):
        p = rng.choice((2, 3))
        inst = random_instance(rng, 2, rng.randint(1, 12), p=p, bound=rng.choice((2, 5, 16)))
        a = radial_sweep_2d(inst).nu
        assert a == solve_regions(inst).nu
        if inst.n <= 8:
            assert a == brute_single(inst).nu


def test_sweep_larger_instances_match_regions():
    rng = random.Random(12)
    for _ in range(3):
        inst = random_instance(rng, 2, 36, bound=30)
        assert radial_sweep_2d(inst).nu == solve_regions(inst).nu


def test_sweep_handles_degenerate_directions():
    # voters straight above/below the opponent and collinear duplicates
    inst = ElectionInstance(2, 2, [(0, 1), (0, -2), (0, 3), (1, 0), (-2, 0), (2, 2), (-1, -1)], [(0, 0)])
    assert radial_sweep_2d(inst).nu == brute_single(inst).nu


def test_scale_into_balls_examples():
    inst = ElectionInstance(2, 2, [(1, 0)], [(0, 0)])
    assert scale_into_balls(inst, set(), (5, 7)) == (5, 7)
    assert scaling_factor([(1, 0)], (1, 0), 2) == Rat(1, 2)
    assert scale_into_balls(inst, {0}, (1, 0)) == (Rat(1, 2), 0)
    with pytest.raises(ValueError):
        scale_into_balls(inst, {0}, (-1, 0))


def test_scale_is_verified_on_random_regions():
    rng = random.Random(21)
    for _ in range(40):
        inst = random_instance(rng, rng.choice((2, 3)), 6, p=rng.choice((2, 3, 4)))
        balls = critical_regions(inst)
        for won, y in region_voter_sets(inst):
            pt = scale_into_balls(inst, won, y)
            assert all(in_open_ball(pt, balls[i]) for i in won)


def test_closed_form_scaling_without_zero_coordinates():
    rng = random.Random(30)
    nonzero = [v for v in range(-6, 7) if v]
    checked = 0
    while checked < 300:
        d, p = rng.choice((2, 3)), rng.choice((2, 3, 4))
        z = tuple(rng.choice(nonzero) for _ in range(d))
        y = tuple(Rat(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(d))
        if sum(a * b for a, b in zip(tangent_normal(z, p), y)) <= 0:
            continue
        inst = ElectionInstance(d, p, [z], [(0,) * d])
        lam = scaling_factor([z], y, p)
        assert in_open_ball(tuple(v * lam for v in y), critical_regions(inst)[0])
        checked += 1


def test_safety_net_covers_zero_coordinates():
    # z = (0, 1), y = (10, 1): the closed form ignores the first coordinate
    inst = ElectionInstance(2, 2, [(0, 1)], [(0, 0)])
    stats: dict = {}
    pt = scale_into_balls(inst, {0}, (10, 1), stats=stats)
    assert eval_nu(inst, pt)[0] == 1
    assert stats["halvings"] > 0


def test_two_approx():
    one = ElectionInstance(2, 2, [(3, 4)], [(1, 1)])
    assert two_approx(one).nu == 1
    sym = ElectionInstance(2, 2, [(1, 2), (-1, -2), (3, -1), (-3, 1)], [(0, 0)])
    assert two_approx(sym).nu == 2
    rng = random.Random(3)
    for _ in range(60):
        inst = random_instance(rng, rng.choice((2, 3)), rng.randint(1, 10), p=rng.choice((2, 3)))
        assert two_approx(inst).nu >= ceil(solve_single(inst).nu / 2)


def test_avoiding_direction_falls_back_to_moment_curve():
    normals = [(1, 0), (0, 1), (1, -1)]
    v = avoiding_direction(normals, 2)
    assert all(sum(a * b for a, b in zip(n, v)) != 0 for n in normals)
    assert v == (1, 2)


@given(
    st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=10),
    st.tuples(st.integers(-6, 6), st.integers(-6, 6)).filter(any),
)
@settings(max_examples=150, deadline=None)
def test_antipodality(voters, t):
    inst = ElectionInstance(2, 2, voters, [(0, 0)])
    arr = CentralArrangement.from_instance(inst)
    pos, neg, zero = arr.side_counts(t)
    assert len(arr.positive_set(t)) == pos
    assert pos + neg + zero == len(arr)
    assert len(arr.positive_set(tuple(-v for v in t))) == neg


def test_solve_single_example1_restricted(example1):
    inst = ElectionInstance(1, 2, example1.voters, [(2,)])
    # 1-d brute force over midpoints and far points
    coords = sorted({x[0] for x in inst.voters} | {2})
    probes = [Rat(a + b, 2) for a, b in zip(coords, coords[1:])] + [Rat(coords[0] - 1), Rat(coords[-1] + 1)]
    best = max(eval_nu(inst, (q,))[0] for q in probes)
    assert solve_single(inst).nu == best == 6


def test_solve_single_five_voters_plane():
    inst = ElectionInstance(2, 2, [(2, 1), (1, 3), (-2, 2), (-1, -2), (3, -1)], [(0, 0)])
    res = solve_single(inst)
    assert res.nu == brute_single(inst).nu == enumerate_regions(CentralArrangement.from_instance(inst)).positives


def test_all_voters_unwinnable():
    inst = ElectionInstance(2, 2, [(0, 0), (0, 0)], [(0, 0)])
    assert solve_single(inst).nu == 0
    assert solve_regions(inst).nu == 0


def test_single_solvers_reject_several_candidates(example1):
    with pytest.raises(ValueError):
        solve_single(example1)
