from fractions import Fraction
from math import sqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spatialvote.geometry import (
    DimensionError,
    Hyperplane,
    OpenBall,
    Rat,
    as_point,
    as_rat,
    dot,
    in_closed_ball,
    in_open_ball,
    lp_dist_pow,
    on_sphere,
    rat_str,
)
from spatialvote.lp import farkas_certificate, is_strictly_feasible, strict_homogeneous_lp
from spatialvote.quadext import BiQuadExt, QuadExt, quadext_sign, rational_sqrt, sign_quadratic, sqrt_bounds

small = st.integers(-20, 20)
rats = st.builds(lambda a, b: Rat(a, b), st.integers(-50, 50), st.integers(1, 12))


def test_as_rat_accepts_exact_forms():
    assert as_rat(3) == 3
    assert as_rat("7/2") == Rat(7, 2)
    assert as_rat(" -4 ") == -4
    assert as_rat(Fraction(1, 3)) == Rat(1, 3)


@pytest.mark.parametrize("bad", [0.5, True, "1/0", "x", "", None])
def test_as_rat_rejects(bad):
    with pytest.raises((TypeError, ValueError)):
        as_rat(bad)


def test_rat_str():
    assert rat_str(Rat(6, 3)) == "2"
    assert rat_str(Rat(-3, 4)) == "-3/4"


def test_lp_dist_pow():
    assert lp_dist_pow((0, 0), (3, 4), 2) == 25
    assert lp_dist_pow((0, 0), (1, -2), 3) == 9
    with pytest.raises(DimensionError):
        lp_dist_pow((0,), (1, 2), 2)


def test_ball_membership_is_strict():
    b = OpenBall((0, 0), 1, 2)
    assert in_open_ball((Rat(1, 2), 0), b)
    assert not in_open_ball((1, 0), b)
    assert in_closed_ball((1, 0), b) and on_sphere((0, 1), b)
    empty = OpenBall((0, 0), 0, 2)
    assert empty.is_empty and not in_open_ball((0, 0), empty)
    with pytest.raises(ValueError):
        OpenBall((0, 0), -1)


def test_hyperplane():
    h = Hyperplane((1, 1), 1)
    assert h.side((1, 1)) == 1 and h.side((0, 0)) == -1 and h.contains((1, 0))
    with pytest.raises(ValueError):
        Hyperplane((0, 0), 1)


def test_rational_sqrt_and_bounds():
    assert rational_sqrt(Rat(9, 4)) == Rat(3, 2)
    assert rational_sqrt(2) is None
    lo, hi = sqrt_bounds(2, 40)
    assert lo * lo < 2 < hi * hi and hi - lo < Rat(1, 2**39)


@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(0, 40))
def test_quadratic_sign_matches_float(a, b, c):
    val = a + b * sqrt(c)
    s = sign_quadratic(Rat(a), Rat(b), Rat(c))
    if abs(val) > 1e-9:
        assert s == (1 if val > 0 else -1)
    assert s == quadext_sign(QuadExt(a, b, c))


def test_quadratic_sign_exact_zero():
    # 3 - sqrt(9) folds, 2*sqrt(2) - sqrt(8) only via squaring
    assert QuadExt(3, -1, 9).sign() == 0
    assert sign_quadratic(Rat(0), Rat(0), Rat(8)) == 0
    assert BiQuadExt(0, 2, -1, 0, 2, 8).sign() == 0


@given(rats, rats, rats, rats, st.integers(0, 30), st.integers(0, 30))
@settings(max_examples=300)
def test_biquadratic_sign_matches_float(a, b, e, f, c1, c2):
    x = BiQuadExt(a, b, e, f, c1, c2)
    val = float(a) + float(b) * sqrt(c1) + float(e) * sqrt(c2) + float(f) * sqrt(c1 * c2)
    if abs(val) > 1e-9:
        assert x.sign() == (1 if val > 0 else -1)


def test_quadext_arithmetic():
    x = QuadExt(1, 1, 2)
    y = x * x.conjugate()
    assert y.b == 0 and y.a == -1
    assert (x + 1).a == 2 and (x - x).sign() == 0


def test_lp_small_cases():
    assert strict_homogeneous_lp([(1, 0)]) is not None
    assert strict_homogeneous_lp([(1, 0), (-1, 0)]) is None
    assert farkas_certificate([(1, 0), (-1, 0)]) == (Rat(1, 2), Rat(1, 2))
    assert strict_homogeneous_lp([(0, 0)]) is None
    assert strict_homogeneous_lp([], dim=3) == (1, 0, 0)
    assert farkas_certificate([(1, 1)]) is None
    with pytest.raises(DimensionError):
        strict_homogeneous_lp([(1, 0), (1,)])


@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=9))
@settings(max_examples=200, deadline=None)
def test_lp_witness_or_certificate(rows):
    y = strict_homogeneous_lp(rows)
    if y is not None:
        assert all(dot(as_point(r), y) >= 1 for r in rows)
        assert farkas_certificate(rows) is None
    else:
        lam = farkas_certificate(rows)
        assert lam is not None and min(lam) >= 0 and sum(lam) == 1
        for k in range(3):
            assert sum(l * r[k] for l, r in zip(lam, rows)) == 0
    assert is_strictly_feasible(rows) == (y is not None)
