"""Exact sign determination in Q(sqrt c) and Q(sqrt c1, sqrt c2).

Circle-circle intersection points have coordinates of the form
``a + b*sqrt(D)`` with rational ``a, b, D``; comparing the angles of two such
points around a centre produces numbers ``a + b sqrt c1 + e sqrt c2 +
f sqrt(c1 c2)``.  Signs are first attempted with rational interval bounds on
the square roots (cheap and conclusive unless the value is tiny) and
otherwise decided exactly by case analysis and squaring.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .geometry import ZERO, Rat, as_rat

_PRECISIONS = (64, 256)


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def rational_sqrt(c):
    """Exact square root of a non-negative rational, or None if irrational."""
    c = as_rat(c)
    if c < 0:
        raise ValueError("negative radicand")
    n, d = int(c.numerator), int(c.denominator)
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Rat(rn, rd)
    return None


def sqrt_bounds(c, bits: int):
    """Rationals ``lo <= sqrt(c) <= hi`` with ``hi - lo <= 2**-bits / den(c)``."""
    c = as_rat(c)
    n, d = int(c.numerator), int(c.denominator)
    scaled = n * d << (2 * bits)
    s = isqrt(scaled)
    denom = d << bits
    lo = Rat(s, denom)
    hi = lo if s * s == scaled else Rat(s + 1, denom)
    return lo, hi


def _term_bounds(coef, lo, hi):
    if coef >= 0:
        return coef * lo, coef * hi
    return coef * hi, coef * lo


def sign_quadratic(a, b, c) -> int:
    """Exact sign of ``a + b*sqrt(c)``."""
    sa = _sgn(a)
    if b == 0 or c == 0:
        return sa
    sb = _sgn(b)
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    return sa * _sgn(a * a - b * b * c)


def sign_biquadratic(a, b, e, f, c1, c2) -> int:
    """Exact sign of ``a + b sqrt(c1) + e sqrt(c2) + f sqrt(c1 c2)``.

    Written as ``X + Y sqrt(c2)`` with ``X, Y`` in Q(sqrt c1); when X and Y
    disagree in sign the answer is ``sign(X) * sign(X^2 - c2 Y^2)``, a single
    further quadratic sign.
    """
    if c2 == 0 or (e == 0 and f == 0):
        return sign_quadratic(a, b, c1)
    sx = sign_quadratic(a, b, c1)
    sy = sign_quadratic(e, f, c1)
    if sx == 0:
        return sy
    if sy == 0 or sx == sy:
        return sx
    ra = a * a + b * b * c1 - (e * e + f * f * c1) * c2
    rb = 2 * (a * b - e * f * c2)
    return sx * sign_quadratic(ra, rb, c1)


@dataclass(frozen=True)
class QuadExt:
    """The real number ``a + b*sqrt(c)``; ``c`` is never a rational square unless ``b == 0``."""

    a: Rat
    b: Rat = ZERO
    c: Rat = ZERO

    def __post_init__(self):
        a, b, c = as_rat(self.a), as_rat(self.b), as_rat(self.c)
        if c < 0:
            raise ValueError("radicand must be non-negative")
        if b != 0:
            root = rational_sqrt(c)
            if root is not None:
                a, b, c = a + b * root, ZERO, ZERO
        else:
            c = ZERO
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.b != 0 and self.b != 0 and other.c != self.c:
                raise ValueError("mixing different radicands")
            return other
        return QuadExt(as_rat(other))

    def _radicand(self, other: "QuadExt"):
        return self.c if self.b != 0 else other.c

    def __add__(self, other):
        o = self._coerce(other)
        return QuadExt(self.a + o.a, self.b + o.b, self._radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.c)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        c = self._radicand(o)
        return QuadExt(self.a * o.a + self.b * o.b * c, self.a * o.b + self.b * o.a, c)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.c)

    def sign(self) -> int:
        return quadext_sign(self)

    def bounds(self, bits: int):
        if self.b == 0:
            return self.a, self.a
        lo, hi = sqrt_bounds(self.c, bits)
        tlo, thi = _term_bounds(self.b, lo, hi)
        return self.a + tlo, self.a + thi

    def __float__(self):
        return float(self.a) + float(self.b) * float(self.c) ** 0.5


@dataclass(frozen=True)
class BiQuadExt:
    """``a + b sqrt(c1) + e sqrt(c2) + f sqrt(c1 c2)`` with rational entries."""

    a: Rat
    b: Rat
    e: Rat
    f: Rat
    c1: Rat
    c2: Rat

    def __post_init__(self):
        a, b, e, f = (as_rat(v) for v in (self.a, self.b, self.e, self.f))
        c1, c2 = as_rat(self.c1), as_rat(self.c2)
        if c1 < 0 or c2 < 0:
            raise ValueError("radicands must be non-negative")
        r1 = rational_sqrt(c1)
        if r1 is not None:
            a, b, e, f, c1 = a + b * r1, ZERO, e + f * r1, ZERO, ZERO
        r2 = rational_sqrt(c2)
        if r2 is not None:
            a, e, b, f, c2 = a + e * r2, ZERO, b + f * r2, ZERO, ZERO
        if c1 != 0 and c2 != 0:
            r12 = rational_sqrt(c1 * c2)
            if r12 is not None:
                # sqrt(c2) = r12 / c1 * sqrt(c1)
                a, b, e, f, c2 = a + f * r12, b + e * r12 / c1, ZERO, ZERO, ZERO
        for name, v in zip(("a", "b", "e", "f", "c1", "c2"), (a, b, e, f, c1, c2)):
            object.__setattr__(self, name, v)

    def bounds(self, bits: int):
        lo, hi = self.a, self.a
        for coef, rad in ((self.b, self.c1), (self.e, self.c2), (self.f, self.c1 * self.c2)):
            if coef == 0 or rad == 0:
                continue
            slo, shi = sqrt_bounds(rad, bits)
            tlo, thi = _term_bounds(coef, slo, shi)
            lo += tlo
            hi += thi
        return lo, hi

    def sign(self) -> int:
        return quadext_sign(self)

    def __float__(self):
        c1, c2 = float(self.c1), float(self.c2)
        return (
            float(self.a)
            + float(self.b) * c1**0.5
            + float(self.e) * c2**0.5
            + float(self.f) * (c1 * c2) ** 0.5
        )


def quadext_sign(x) -> int:
    """Sign (-1, 0, +1) of a :class:`QuadExt`, :class:`BiQuadExt` or rational."""
    if not isinstance(x, (QuadExt, BiQuadExt)):
        return _sgn(as_rat(x))
    for bits in _PRECISIONS:
        lo, hi = x.bounds(bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if lo == hi:
            return 0
    if isinstance(x, QuadExt):
        return sign_quadratic(x.a, x.b, x.c)
    return sign_biquadratic(x.a, x.b, x.e, x.f, x.c1, x.c2)
