"""Reduced rational functions in one variable over Q."""

from __future__ import annotations

from fractions import Fraction

import mpmath
from flint import fmpq, fmpq_poly

from .laurent import LaurentPoly, _strip, to_fmpq, to_fraction


class RatFunc:
    """Element of Q(x) in canonical form ``x**shift * N(x) / D(x)``.

    ``N`` and ``D`` are coprime polynomials with nonzero constant terms and
    ``D`` is monic, so two equal functions always have identical fields.
    """

    __slots__ = ("_shift", "_num", "_den")

    def __init__(self, num=0, den=1):
        num = LaurentPoly.coerce(num)
        den = LaurentPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self._set(0, fmpq_poly([]), fmpq_poly([1]))
            return
        self._set_reduced(num.shift - den.shift, num.body, den.body)

    def _set(self, shift, num, den):
        self._shift, self._num, self._den = shift, num, den

    def _set_reduced(self, shift: int, num: fmpq_poly, den: fmpq_poly):
        if num.is_zero():
            self._set(0, fmpq_poly([]), fmpq_poly([1]))
            return
        num, s1 = _strip(num, 0)
        den, s2 = _strip(den, 0)
        g = num.gcd(den)
        if g.degree() > 0:
            num = num // g
            den = den // g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        self._set(shift + s1 - s2, num, den)

    @classmethod
    def _make(cls, shift, num, den) -> "RatFunc":
        obj = cls.__new__(cls)
        obj._set_reduced(shift, num, den)
        return obj

    @classmethod
    def coerce(cls, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        return cls(other)

    @classmethod
    def monomial(cls, exponent: int, coefficient=1) -> "RatFunc":
        return cls(LaurentPoly.monomial(exponent, coefficient))

    # -- views -------------------------------------------------------------

    @property
    def num(self) -> LaurentPoly:
        return LaurentPoly.from_flint(self._num, self._shift)

    @property
    def den(self) -> LaurentPoly:
        return LaurentPoly.from_flint(self._den, 0)

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_laurent(self) -> bool:
        return self._den.degree() == 0

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError("denominator is not a unit")
        return self.num

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self._shift, other._shift)
        a = self._num * _xpow(self._shift - lo)
        b = other._num * _xpow(other._shift - lo)
        if self._den == other._den:
            return RatFunc._make(lo, a + b, self._den)
        g = self._den.gcd(other._den)
        d1 = self._den // g
        d2 = other._den // g
        return RatFunc._make(lo, a * d2 + b * d1, d1 * other._den)

    __radd__ = __add__

    def __neg__(self):
        obj = RatFunc.__new__(RatFunc)
        obj._set(self._shift, -self._num, self._den)
        return obj

    def __sub__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, fmpq)):
            c = to_fmpq(other)
            if c == 0:
                return RatFunc()
            obj = RatFunc.__new__(RatFunc)
            obj._set(self._shift, self._num * c, self._den)
            return obj
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RatFunc()
        # Cross-cancel first to keep the operands small.
        g1 = self._num.gcd(other._den)
        g2 = other._num.gcd(self._den)
        n = (self._num // g1) * (other._num // g2)
        d = (self._den // g2) * (other._den // g1)
        return RatFunc._make(self._shift + other._shift, n, d)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc._make(-self._shift, self._den, self._num)

    def __truediv__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        obj = RatFunc.__new__(RatFunc)
        obj._set(self._shift * k, self._num ** k, self._den ** k)
        return obj

    def shifted(self, k: int) -> "RatFunc":
        """Multiply by x**k."""
        if self.is_zero():
            return self
        obj = RatFunc.__new__(RatFunc)
        obj._set(self._shift + k, self._num, self._den)
        return obj

    # -- substitution and evaluation --------------------------------------

    def subs_power(self, k: int) -> "RatFunc":
        """Substitute x -> x**k."""
        return RatFunc(self.num.subs_power(k), self.den.subs_power(k))

    def reciprocal_variable(self) -> "RatFunc":
        """Substitute x -> 1/x."""
        return self.subs_power(-1)

    def __call__(self, x):
        if isinstance(x, mpmath.mpf):
            d = self.den(x)
            if d == 0:
                raise ZeroDivisionError("evaluation at a pole")
            return self.num(x) / d
        xq = to_fraction(x)
        d = self.den(xq)
        if d == 0:
            raise ZeroDivisionError(f"evaluation at a pole x={xq}")
        return self.num(xq) / d

    # -- comparison and display -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = RatFunc.coerce(other)
            except TypeError:
                return NotImplemented
        return (
            self._shift == other._shift
            and self._num == other._num
            and self._den == other._den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num!r} / {self.den!r})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data) -> "RatFunc":
        return cls(LaurentPoly.from_json(data["num"]), LaurentPoly.from_json(data["den"]))


def _xpow(k: int) -> fmpq_poly:
    return fmpq_poly([0] * k + [1])
