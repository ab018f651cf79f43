"""Scalar arithmetic shared by every other module.

Three kinds of coefficients appear in this package:

* exact rationals (``fractions.Fraction``, aliased ``Rational``),
* one quadratic extension of the rationals, ``QuadExt``, holding a + b*mu
  with a fixed defining value d = mu^2,
* arbitrary-precision floats, ``BigFloat``, wrapping mpmath.

Hot loops elsewhere operate on raw ``mpmath.mpf`` values with the working
precision set once per run; ``BigFloat`` is the boundary type used by caches,
reports and the public evaluators, where the digit count must travel with
the value.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp

Rational = Fraction

GUARD_DIGITS = 10


def rational_normalize(n: int, d: int) -> Fraction:
    """Lowest-terms rational with positive denominator.  d must be nonzero."""
    if d == 0:
        raise ValueError("zero denominator")
    return Fraction(n, d)


class QuadExt:
    """a + b*mu with mu^2 = d.  Components may be Fraction or mpf; every
    value taking part in one computation must share the same d."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        self.a = a
        self.b = b
        self.d = d

    @classmethod
    def of(cls, scalar, d):
        return cls(scalar, 0 * scalar if not isinstance(scalar, int) else 0, d)

    @classmethod
    def mu(cls, d):
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError("mismatched quadratic contexts")
            return other
        if isinstance(other, (int, Fraction, mpmath.mpf)):
            return QuadExt(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(o.a - self.a, o.b - self.b, self.d)

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        norm = o.a * o.a - o.d * o.b * o.b
        if norm == 0:
            raise ZeroDivisionError("non-invertible quadratic element")
        # keep integer components exact instead of decaying to float
        inv_norm = Fraction(1, norm) if isinstance(norm, int) else 1 / norm
        inv = QuadExt(o.a * inv_norm, -o.b * inv_norm, self.d)
        return self * inv

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.a == other and self.b == 0
        if isinstance(other, QuadExt):
            return self.d == other.d and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def is_zero(self, tol=0) -> bool:
        if tol:
            return abs(self.a) < tol and abs(self.b) < tol
        return self.a == 0 and self.b == 0

    def __repr__(self):
        return f"({self.a} + {self.b}*mu)"


def quadext_mul(x: QuadExt, y: QuadExt) -> QuadExt:
    """Product in Q(mu); raises on mismatched contexts."""
    return x * y


NumberLike = Union[int, Fraction, "BigFloat"]


def _to_mpf(x, dps):
    with mp.workdps(dps):
        if isinstance(x, BigFloat):
            return x.value
        if isinstance(x, Fraction):
            return mp.mpf(x.numerator) / x.denominator
        return mp.mpf(x)


class BigFloat:
    """Arbitrary-precision real carrying its significant-digit budget.

    Arithmetic runs with GUARD_DIGITS of slack; the result's budget is the
    smaller of the operands'.  Equality needs an explicit tolerance, so
    ``==`` is refused; use close_to().
    """

    __slots__ = ("value", "digits")

    def __init__(self, value, digits: int):
        self.digits = digits
        with mp.workdps(digits + GUARD_DIGITS):
            if isinstance(value, Fraction):
                self.value = mp.mpf(value.numerator) / value.denominator
            elif isinstance(value, BigFloat):
                self.value = value.value
            else:
                self.value = mp.mpf(value)

    def _bin(self, other, op):
        if isinstance(other, BigFloat):
            dig = min(self.digits, other.digits)
            ov = other.value
        elif isinstance(other, (int, Fraction)):
            dig = self.digits
            ov = _to_mpf(other, dig + GUARD_DIGITS)
        else:
            return NotImplemented
        with mp.workdps(dig + GUARD_DIGITS):
            return BigFloat(op(self.value, ov), dig)

    def __add__(self, other):
        return self._bin(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._bin(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._bin(other, lambda x, y: y - x)

    def __mul__(self, other):
        return self._bin(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._bin(other, lambda x, y: x / y)

    def __rtruediv__(self, other):
        return self._bin(other, lambda x, y: y / x)

    def __neg__(self):
        return BigFloat(-self.value, self.digits)

    def __abs__(self):
        return BigFloat(abs(self.value), self.digits)

    def __pow__(self, k: int):
        with mp.workdps(self.digits + GUARD_DIGITS):
            return BigFloat(self.value ** k, self.digits)

    def __eq__(self, other):
        raise TypeError("BigFloat equality requires a tolerance; use close_to()")

    def __hash__(self):
        raise TypeError("BigFloat is not hashable")

    def close_to(self, other, tol) -> bool:
        diff = self - other if isinstance(other, (BigFloat, int, Fraction)) else None
        if diff is None:
            raise TypeError(f"cannot compare BigFloat with {type(other)}")
        return abs(diff.value) < tol

    def __repr__(self):
        with mp.workdps(self.digits):
            return f"BigFloat({mp.nstr(self.value, min(self.digits, 20))}, digits={self.digits})"


def to_decimal(x: BigFloat, places: int) -> str:
    """Fixed-point decimal rendering with `places` digits after the point.

    Requires places <= digits - GUARD_DIGITS so every printed digit is
    backed by guaranteed precision.
    """
    if places > x.digits - GUARD_DIGITS:
        raise ValueError(
            f"requested {places} places but only {x.digits - GUARD_DIGITS} are guaranteed"
        )
    with mp.workdps(x.digits + GUARD_DIGITS):
        scaled = mp.nint(x.value * mp.mpf(10) ** places)
        n = int(scaled)
    sign = "-" if n < 0 else ""
    q, r = divmod(abs(n), 10 ** places)
    if places == 0:
        return f"{sign}{q}"
    return f"{sign}{q}.{r:0{places}d}"


def is_zero_scalar(x, tol=0) -> bool:
    """Zero test that works across all coefficient kinds used here.

    With tol == 0 the test is exact; with tol > 0 it is |x| < tol.
    """
    if isinstance(x, QuadExt):
        return x.is_zero(tol)
    if isinstance(x, BigFloat):
        return abs(x.value) < tol if tol else x.value == 0
    if tol:
        return abs(x) < tol
    return x == 0


def scalar_inv(c):
    """1/c without falling into float division for plain ints."""
    if isinstance(c, int):
        return Fraction(1, c)
    return 1 / c


def scalar_div_int(c, k: int):
    if isinstance(c, int):
        return Fraction(c, k)
    return c / k


def scalar_magnitude(x):
    """|x| as something comparable; for quadratic elements the larger of the
    two component magnitudes."""
    if isinstance(x, QuadExt):
        return max(abs(x.a), abs(x.b))
    if isinstance(x, BigFloat):
        return abs(x.value)
    return abs(x)
