"""Exact rational points, hyperplanes and open lp-balls.

Everything here works over the rationals.  ``Rat`` is ``gmpy2.mpq`` when
gmpy2 is importable (it is an order of magnitude faster than
``fractions.Fraction``) and falls back to ``Fraction`` otherwise.  Both are
always kept in lowest terms with a positive denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Rat = Fraction

RatPoint = tuple  # tuple of Rat, one entry per coordinate

ZERO = Rat(0)
ONE = Rat(1)


class DimensionError(ValueError):
    """Raised when points, balls or hyperplanes of different dimension meet."""


def as_rat(value) -> "Rat":
    """Convert ints, rationals and ``"a/b"`` strings to an exact ``Rat``.

    Floats are refused on purpose: silently importing binary rounding error
    would defeat the point of exact arithmetic.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rational coordinates")
    if isinstance(value, Rat):
        return value
    if isinstance(value, int):
        return Rat(value)
    if isinstance(value, Rational):
        return Rat(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational token")
        num, sep, den = text.partition("/")
        try:
            n = int(num)
            d = int(den) if sep else 1
        except ValueError:
            raise ValueError(f"not a rational: {value!r}") from None
        if d == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Rat(n, d)
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Rat(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def as_point(coords: Iterable) -> RatPoint:
    return tuple(as_rat(c) for c in coords)


def rat_str(x) -> str:
    """Render a rational as ``"n"`` or ``"n/d"``."""
    x = as_rat(x)
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def _check_dims(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} vs {len(b)}")


def dot(a: Sequence, b: Sequence):
    _check_dims(a, b)
    return sum((x * y for x, y in zip(a, b)), ZERO)


def sub(a: Sequence, b: Sequence) -> RatPoint:
    _check_dims(a, b)
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> RatPoint:
    _check_dims(a, b)
    return tuple(x + y for x, y in zip(a, b))


def scale(a: Sequence, s) -> RatPoint:
    return tuple(x * s for x in a)


def norm2(a: Sequence):
    return sum((x * x for x in a), ZERO)


def lp_dist_pow(a: Sequence, b: Sequence, p: int):
    """Return ``sum_j |a_j - b_j|**p``, the p-th power of the lp distance."""
    _check_dims(a, b)
    if p < 1:
        raise ValueError("norm exponent must be a positive integer")
    if p == 2:
        return sum(((x - y) * (x - y) for x, y in zip(a, b)), ZERO)
    return sum((abs(x - y) ** p for x, y in zip(a, b)), ZERO)


@dataclass(frozen=True)
class Hyperplane:
    """The set ``{x : coeffs . x = offset}``."""

    coeffs: RatPoint
    offset: "Rat"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", as_point(self.coeffs))
        object.__setattr__(self, "offset", as_rat(self.offset))
        if all(c == 0 for c in self.coeffs):
            raise ValueError("hyperplane needs a nonzero normal")

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def side(self, x: Sequence) -> int:
        """Sign of ``coeffs . x - offset``."""
        v = dot(self.coeffs, x) - self.offset
        return (v > 0) - (v < 0)

    def contains(self, x: Sequence) -> bool:
        return self.side(x) == 0


@dataclass(frozen=True)
class OpenBall:
    """Open lp-ball stored by centre and the p-th power of its radius.

    ``radius_pow == 0`` is legal and denotes the empty set (a voter sitting
    on top of a candidate can never be won).
    """

    center: RatPoint
    radius_pow: "Rat"
    p: int = 2

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "radius_pow", as_rat(self.radius_pow))
        if self.radius_pow < 0:
            raise ValueError("radius_pow must be non-negative")
        if int(self.p) != self.p or self.p < 1:
            raise ValueError("norm exponent must be a positive integer")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def is_empty(self) -> bool:
        return self.radius_pow == 0

    def excess(self, pt: Sequence):
        """``dist**p(pt, center) - radius_pow``; negative inside, zero on the sphere."""
        return lp_dist_pow(pt, self.center, self.p) - self.radius_pow


def in_open_ball(pt: Sequence, ball: OpenBall) -> bool:
    return ball.excess(pt) < 0


def in_closed_ball(pt: Sequence, ball: OpenBall) -> bool:
    return ball.excess(pt) <= 0


def on_sphere(pt: Sequence, ball: OpenBall) -> bool:
    return ball.excess(pt) == 0
