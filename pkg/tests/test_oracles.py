import random

import pytest

from spatialvote.election import BallMultiset, ElectionInstance, eval_nu, plurality_multiset, reduce_fls
from spatialvote.geometry import OpenBall, in_open_ball
from spatialvote.instance_io import dumps_instance
from spatialvote.oracles import (
    GenSpec,
    brute_single,
    fls_brute,
    gen_instance,
    radical_centres,
    radical_feet,
    sample_lower_bound,
)
from spatialvote.single import solve_single


def test_gen_is_deterministic():
    spec = GenSpec(3, 12, 2, 3, 16, 99)
    assert dumps_instance(gen_instance(spec)) == dumps_instance(gen_instance(spec))
    assert gen_instance(spec) != gen_instance(GenSpec(3, 12, 2, 3, 16, 100))


def test_gen_keeps_voters_off_candidates():
    for seed in range(30):
        inst = gen_instance(GenSpec(1, 10, 2, 2, 1, seed))
        assert not set(inst.voters) & set(inst.candidates)
        clustered = gen_instance(GenSpec(2, 10, 2, 2, 8, seed, "clustered"))
        assert not set(clustered.voters) & set(clustered.candidates)
        assert all(abs(v) <= 8 for pt in clustered.voters for v in pt)


def test_gen_bipolar():
    inst = gen_instance(GenSpec(3, 6, 1, 2, 16, 4, "bipolar"))
    assert inst.candidates == ((0, 0, 0),)
    assert all(v in (-1, 1) for pt in inst.voters for v in pt)


def test_gen_rejects_bad_spec():
    with pytest.raises(ValueError):
        GenSpec(0, 1)
    with pytest.raises(ValueError):
        GenSpec(1, 1, mode="weird")
    with pytest.raises(ValueError):
        GenSpec(1, 1, bound=0)


def test_hand_built_example1(example1):
    assert eval_nu(example1, (23,))[0] == 4


def test_brute_small_cases():
    assert brute_single(ElectionInstance(2, 2, [(1, 2)], [(0, 0)])).nu == 1
    pairs = ElectionInstance(2, 2, [(1, 2), (-1, -2), (3, 1), (-3, -1)], [(0, 0)])
    assert brute_single(pairs).nu == 2
    with pytest.raises(ValueError):
        brute_single(ElectionInstance(1, 2, [(x,) for x in range(1, 22)], [(0,)]))


def test_brute_matches_solver_d3():
    for seed in range(20):
        inst = gen_instance(GenSpec(3, 8, 1, 2, 16, seed))
        res = brute_single(inst)
        assert res.nu == solve_single(inst).nu
        assert eval_nu(inst, res.witness)[0] == res.nu


def test_fls_brute():
    assert fls_brute([[1, 1], [-1, -1]], 2) == (False, 1)
    assert fls_brute([[1, 1, 1], [1, -1, 1], [1, 1, -1]], 3) == (True, 3)
    with pytest.raises(ValueError):
        fls_brute([[1, 1, 1, 1]], 1)


def test_fls_brute_agrees_with_reduction_sample():
    rng = random.Random(6)
    for _ in range(60):
        w = rng.randint(1, 3)
        A = [[rng.choice((-1, 1)) for _ in range(w)] for _ in range(rng.randint(1, 6))]
        inst, _ = reduce_fls(A, 1)
        assert fls_brute(A, 1)[1] == brute_single(inst).nu


def test_sample_single_ball():
    ms = BallMultiset((OpenBall((3, 3), 2),), (1,))
    assert sample_lower_bound(ms, 10) == (1, (3, 3))


def test_sample_two_poles(two_poles):
    score, pt = sample_lower_bound(plurality_multiset(two_poles), 1000)
    assert score == 2 and 3 < pt[0] < 4


def test_sample_is_a_true_lower_bound():
    rng = random.Random(2)
    for seed in range(10):
        ms = BallMultiset(
            tuple(OpenBall((rng.randint(-5, 5), rng.randint(-5, 5)), rng.randint(1, 20)) for _ in range(6)), (1,) * 6
        )
        score, pt = sample_lower_bound(ms, 2000, seed)
        assert score == sum(1 for b in ms.balls if in_open_ball(pt, b))
    with pytest.raises(ValueError):
        sample_lower_bound(ms, 0)


def test_radical_points():
    b1, b2, b3 = OpenBall((0, 0), 1), OpenBall((2, 0), 1), OpenBall((0, 2), 1)
    assert radical_feet([b1, b2]) == [(1, 0)]
    assert radical_centres([b1, b2, b3], 3) == [(1, 1)]
