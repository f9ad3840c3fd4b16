"""Laurent polynomials in one variable with rational coefficients.

A ``LaurentPoly`` is stored as ``x**shift * body`` where ``body`` is a flint
``fmpq_poly`` whose constant term is nonzero.  The public view is the sparse
exponent map ``{exponent: Fraction}``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

import mpmath
from flint import fmpq, fmpq_poly


def to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, fmpq):
        return Fraction(int(c.p), int(c.q))
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


def to_fmpq(c) -> fmpq:
    if isinstance(c, fmpq):
        return c
    f = to_fraction(c)
    return fmpq(f.numerator, f.denominator)


def _strip(poly: fmpq_poly, shift: int) -> tuple[fmpq_poly, int]:
    """Move factors of x out of ``poly`` into ``shift``."""
    if poly.is_zero():
        return fmpq_poly([]), 0
    coeffs = poly.coeffs()
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k:
        poly = fmpq_poly(coeffs[k:])
    return poly, shift + k


class LaurentPoly:
    """Immutable Laurent polynomial over Q."""

    __slots__ = ("_body", "_shift", "_hash")

    def __init__(self, coefficients: Mapping[int, object] | None = None):
        if not coefficients:
            self._body, self._shift = fmpq_poly([]), 0
        else:
            items = {int(e): to_fmpq(c) for e, c in coefficients.items()}
            lo = min(items)
            hi = max(items)
            dense = [fmpq(0)] * (hi - lo + 1)
            for e, c in items.items():
                dense[e - lo] = c
            self._body, self._shift = _strip(fmpq_poly(dense), lo)
        self._hash = None

    @classmethod
    def from_flint(cls, poly: fmpq_poly, shift: int = 0) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._body, obj._shift = _strip(fmpq_poly(poly), shift)
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coefficient=1) -> "LaurentPoly":
        c = to_fmpq(coefficient)
        if c == 0:
            return cls()
        return cls.from_flint(fmpq_poly([c]), exponent)

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls.monomial(0, c)

    @classmethod
    def from_coeff_list(cls, coeffs: Iterable, shift: int = 0) -> "LaurentPoly":
        """Dense coefficient list, lowest exponent first."""
        return cls.from_flint(fmpq_poly([to_fmpq(c) for c in coeffs]), shift)

    @classmethod
    def coerce(cls, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        return cls.constant(other)

    # -- views -------------------------------------------------------------

    @property
    def body(self) -> fmpq_poly:
        return self._body

    @property
    def shift(self) -> int:
        return self._shift

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return {
            self._shift + i: to_fraction(c)
            for i, c in enumerate(self._body.coeffs())
            if c != 0
        }

    def is_zero(self) -> bool:
        return self._body.is_zero()

    @property
    def min_exponent(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no exponents")
        return self._shift

    @property
    def max_exponent(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no exponents")
        return self._shift + self._body.degree()

    @property
    def degree(self) -> int:
        return self.max_exponent

    def coefficient(self, exponent: int) -> Fraction:
        i = exponent - self._shift
        if self.is_zero() or i < 0 or i > self._body.degree():
            return Fraction(0)
        return to_fraction(self._body.coeffs()[i])

    def has_integer_coefficients(self) -> bool:
        return self._body.denom() == 1

    def is_polynomial(self) -> bool:
        return self.is_zero() or self._shift >= 0

    def is_monomial(self) -> bool:
        return not self.is_zero() and self._body.degree() == 0

    def leading_coefficient(self) -> Fraction:
        return to_fraction(self._body.leading_coefficient())

    def to_poly(self) -> fmpq_poly:
        """Ordinary polynomial; raises on negative exponents."""
        if not self.is_polynomial():
            raise ValueError("negative exponents present")
        if self.is_zero():
            return fmpq_poly([])
        return self._body * fmpq_poly([0] * self._shift + [1])

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self._shift, other._shift)
        a = self._body * _xpow(self._shift - lo)
        b = other._body * _xpow(other._shift - lo)
        return LaurentPoly.from_flint(a + b, lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly.from_flint(-self._body, self._shift)

    def __sub__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return LaurentPoly()
        return LaurentPoly.from_flint(self._body * other._body, self._shift + other._shift)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            c = self._body.coeffs()[0]
            return LaurentPoly.from_flint(fmpq_poly([1 / c]) ** (-k), self._shift * k)
        return LaurentPoly.from_flint(self._body ** k, self._shift * k)

    def scale(self, c) -> "LaurentPoly":
        return LaurentPoly.from_flint(self._body * to_fmpq(c), self._shift)

    def shifted(self, k: int) -> "LaurentPoly":
        """Multiply by x**k."""
        if self.is_zero():
            return self
        return LaurentPoly.from_flint(self._body, self._shift + k)

    def divmod_exact(self, other: "LaurentPoly") -> tuple["LaurentPoly", bool]:
        """Divide by ``other``; returns (quotient, exact?)."""
        other = LaurentPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly(), True
        quo, rem = divmod(self._body, other._body)
        return LaurentPoly.from_flint(quo, self._shift - other._shift), rem.is_zero()

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        quo, exact = self.divmod_exact(other)
        if not exact:
            raise ArithmeticError("division is not exact")
        return quo

    def divides(self, other: "LaurentPoly") -> bool:
        """True when ``self`` divides ``other`` in Q[x, 1/x]."""
        return LaurentPoly.coerce(other).divmod_exact(self)[1]

    # -- substitution and evaluation --------------------------------------

    def subs_power(self, k: int) -> "LaurentPoly":
        """Substitute x -> x**k (k may be negative)."""
        if k == 0:
            raise ValueError("x -> x**0 is not a valid substitution")
        if k < 0:
            return self.reciprocal_variable().subs_power(-k)
        if k == 1 or self.is_zero():
            return self
        coeffs = self._body.coeffs()
        dense = [fmpq(0)] * (k * (len(coeffs) - 1) + 1)
        for i, c in enumerate(coeffs):
            dense[k * i] = c
        return LaurentPoly.from_flint(fmpq_poly(dense), self._shift * k)

    def reciprocal_variable(self) -> "LaurentPoly":
        """Substitute x -> 1/x."""
        if self.is_zero():
            return self
        coeffs = self._body.coeffs()
        return LaurentPoly.from_flint(fmpq_poly(coeffs[::-1]), -self.max_exponent)

    def __call__(self, x):
        """Evaluate exactly at a rational, or numerically at an mpf."""
        if self.is_zero():
            return Fraction(0) if not isinstance(x, mpmath.mpf) else mpmath.mpf(0)
        if isinstance(x, mpmath.mpf):
            acc = mpmath.mpf(0)
            for c in reversed(self._body.coeffs()):
                acc = acc * x + mpmath.mpf(int(c.p)) / int(c.q)
            return acc * x ** self._shift
        xq = to_fmpq(x)
        if xq == 0 and self._shift < 0:
            raise ZeroDivisionError("negative exponent evaluated at 0")
        return to_fraction(self._body(xq)) * to_fraction(xq) ** self._shift

    # -- comparison and display -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self._shift == other._shift and self._body == other._body

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._shift, tuple(str(c) for c in self._body.coeffs())))
        return self._hash

    def __repr__(self):
        if self.is_zero():
            return "LaurentPoly(0)"
        terms = []
        for e, c in sorted(self.coefficients.items(), reverse=True):
            terms.append(f"{c}*q^{e}" if e else f"{c}")
        return "LaurentPoly(" + " + ".join(terms) + ")"

    def to_json(self) -> dict[str, str]:
        return {str(e): f"{c.numerator}/{c.denominator}" for e, c in sorted(self.coefficients.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "LaurentPoly":
        return cls({int(e): Fraction(c) for e, c in data.items()})


def _xpow(k: int) -> fmpq_poly:
    return fmpq_poly([0] * k + [1])


X = LaurentPoly.monomial(1)
ONE = LaurentPoly.constant(1)
