"""The (A, r) = (3, 1) specialization and its q -> 1 limit (Catalan's constant).

A_n and B_n are the two coefficients of the base-q linear form in
beta_{sqrt q}(2); they coincide with Phat_2 and Phat_0 of the general bundle.
Here ``x`` is the square root of the base, as everywhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .algebra import LaurentPoly, RatFunc
from .linear_forms import FormParams, LinearFormBundle, PfcTable, build_bundle
from .qseries import DEFAULT_PREC, GUARD_BITS, HPReal, S_n_numeric, alternating_sum, beta_q, dirichlet_beta

LIMIT_EPSILONS = (Fraction(1, 10**4), Fraction(1, 10**5))


@dataclass(frozen=True, order=True)
class HalfInt:
    """An integer or half-integer, stored as twice its value."""

    twice_value: int

    @classmethod
    def of(cls, v) -> "HalfInt":
        v = Fraction(v)
        if (2 * v).denominator != 1:
            raise ValueError(f"{v} is not a half-integer")
        return cls(int(2 * v))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0


def harmonic(m) -> Fraction:
    """H_m for integer m >= 0, and sum_{j=1}^{floor(m)+1} 1/(m-j+1) for half-integers.

    The half-integer branch accepts m = -1/2, where the sum is empty.
    """
    m = m if isinstance(m, HalfInt) else HalfInt.of(m)
    v = m.value
    if m.is_integer:
        if v < 0:
            raise ValueError("harmonic numbers need m >= 0")
        return sum((Fraction(1, j) for j in range(1, int(v) + 1)), Fraction(0))
    if v < Fraction(-1, 2):
        raise ValueError("half-integer harmonic numbers need m >= -1/2")
    return sum((1 / (v - j + 1) for j in range(1, math.floor(v) + 2)), Fraction(0))


def binom_rational(a: Fraction, k: int) -> Fraction:
    """a(a-1)...(a-k+1)/k! for rational a."""
    out = Fraction(1)
    for i in range(k):
        out *= Fraction(a) - i
    return out / math.factorial(k)


def _require_odd(n: int) -> None:
    if not isinstance(n, int) or n < 1 or n % 2 == 0:
        raise ValueError("n must be odd")


def alpha_n(n: int) -> Fraction:
    """Closed form for lim_{q -> 1} A_n(q)."""
    _require_odd(n)
    half = Fraction(1, 2)
    total = Fraction(0)
    for j in range(n + 1):
        m = n - 2 * j  # odd, never zero
        w = (
            m
            * math.comb(n, j) ** 3
            * binom_rational(n + j - half, n)
            * binom_rational(2 * n - j - half, n)
        )
        total += w * (Fraction(1, m) + 3 * harmonic(j) + harmonic(j - half) - harmonic(n + j - half))
    return -2 * total


# -- q-linear form -------------------------------------------------------------


def _bundle(n: int, table: PfcTable | None = None):
    params = FormParams(n, 3, 1)
    if table is None:
        return build_bundle(params)
    from .linear_forms import p_polynomials, phat_coeffs

    pp = p_polynomials(params, table)
    return table, pp, phat_coeffs(params, table, pp)


def An_Bn(n: int, table: PfcTable | None = None) -> tuple[RatFunc, RatFunc]:
    """Exact A_n, B_n at base x^2, assembled from the d_{s,j} table."""
    _require_odd(n)
    table, pp, bundle = _bundle(n, table)
    d = table.d
    A_n = RatFunc(0)
    for j in range(n + 1):
        term = (d[2, j] * 2 + d[3, j]).shifted(1 - 2 * j)
        A_n = A_n + (term if j % 2 == 0 else -term)
    B_n = RatFunc(0)
    for s in range(1, 4):
        for j in range(1, n + 1):
            for k in range(1, j + 1):
                ex = RatFunc(LaurentPoly.constant(1) - LaurentPoly.monomial(2 * k - 1)) ** s
                inner = d[s, j].shifted(2 * (k - j)) / ex
                inner = inner + inner.reciprocal_variable()
                B_n = B_n + (inner if (j + k) % 2 == 0 else -inner)
    half_P1 = RatFunc(0)
    for j in range(n + 1):
        term = d[1, j].shifted(1 - 2 * j)
        half_P1 = half_P1 + (term if j % 2 == 0 else -term)
    B_n = B_n - half_P1 * Fraction(1, 2)
    # cross-module consistency with the general bundle
    if A_n != bundle.phat[2] or B_n != bundle.phat0:
        raise AssertionError("A_n/B_n disagree with the general linear-form bundle")
    return A_n, B_n


def qlinear_residual(n: int, x, prec: int = DEFAULT_PREC, AB=None) -> HPReal:
    """|S_n(x^2) - A_n(x^2) beta_x(2) - B_n(x^2)| at the square root x of the base."""
    A_n, B_n = AB or An_Bn(n)
    x = Fraction(x)
    lhs = S_n_numeric(n, 3, 1, x, prec)
    b2 = beta_q(2, x, prec)
    with mpmath.workprec(prec + GUARD_BITS):
        a, b = A_n(x), B_n(x)
        a = mpmath.mpf(a.numerator) / a.denominator
        b = mpmath.mpf(b.numerator) / b.denominator
        res = abs(lhs.value - a * b2.value - b)
        return HPReal(res, lhs.error + abs(a) * b2.error, prec)


# -- q -> 1 limits ---------------------------------------------------------------


def _eval_near_one(f: RatFunc, eps: Fraction, prec: int):
    """f at x = sqrt(1 - eps), in floating point."""
    with mpmath.workprec(prec):
        x = mpmath.sqrt(1 - mpmath.mpf(eps.numerator) / eps.denominator)
        return f(x)


def extrapolated_limit(f: RatFunc, prec: int = 2 * DEFAULT_PREC, epsilons=LIMIT_EPSILONS):
    """Linear extrapolation to base -> 1 from the two sample points."""
    (e1, e2) = epsilons
    v1, v2 = (_eval_near_one(f, e, prec) for e in (e1, e2))
    with mpmath.workprec(prec):
        ratio = e2 / e1
        t = mpmath.mpf(ratio.numerator) / ratio.denominator
        return v2 - (v1 - v2) * t / (1 - t)


def exact_value_at_one(f: RatFunc):
    """f(1) when 1 is not a pole, else None."""
    try:
        return f(Fraction(1))
    except ZeroDivisionError:
        return None


def weighted_Bn(B_n: RatFunc) -> RatFunc:
    """(1 - x)^2 B_n."""
    one_minus_x = RatFunc(LaurentPoly.constant(1) - LaurentPoly.monomial(1))
    return B_n * one_minus_x**2


def _catalan_series_term(k: int, n: int):
    """n! (k + (n-1)/2) (k-n)_n (k+n)_n / (k-1/2)_{n+1}^3, without the sign."""
    kk = mpmath.mpf(k)
    num = math.factorial(n) * (kk + mpmath.mpf(n - 1) / 2)
    den = mpmath.mpf(1)
    for i in range(n):
        num *= (kk - n + i) * (kk + n + i)
    for i in range(n + 1):
        den *= kk - mpmath.mpf(1) / 2 + i
    return num / den**3


def catalan_series_lhs(n: int, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """-(1/2) n! sum_{k>=1} (-1)^k (k+(n-1)/2) (k-n)_n (k+n)_n / (k-1/2)_{n+1}^3.

    Terms with k <= n vanish through (k-n)_n; summation starts at k = n+1.
    """
    _require_odd(n)
    with mpmath.workprec(prec + GUARD_BITS):
        start = n + 1
        s = alternating_sum(lambda k: _catalan_series_term(k, n), prec, start=start)
        # sum_{k>=start} (-1)^k a_k = (-1)^start * s
        total = s if start % 2 == 0 else -s
        return -total / 2


@dataclass(frozen=True)
class CatalanForm:
    n: int
    lhs: mpmath.mpf
    alpha: Fraction
    beta_extracted: mpmath.mpf
    prec: int

    @property
    def form_value(self):
        return self.lhs


def catalan_form(n: int, prec: int = DEFAULT_PREC) -> CatalanForm:
    _require_odd(n)
    lhs = catalan_series_lhs(n, prec)
    a = alpha_n(n)
    G = dirichlet_beta(2, prec).value
    with mpmath.workprec(prec + GUARD_BITS):
        beta = lhs - mpmath.mpf(a.numerator) / a.denominator * G
    return CatalanForm(n, lhs, a, beta, prec)
