"""Cyclotomic polynomials and the products built from them.

Includes ``d_n`` (the q-analogue of lcm(1..n)), the odd-index product
``Delta_n`` and the even-index product ``varphi_n``, plus the Möbius function.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
import operator

import numpy as np
from flint import fmpq_poly

from .laurent import LaurentPoly, to_fraction


def _require_positive(name: str, value: int) -> None:
    if not isinstance(value, int) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def totient(n: int) -> int:
    _require_positive("n", n)
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def mobius(d: int) -> int:
    """Möbius function by trial factorization."""
    _require_positive("d", d)
    sign, m, p = 1, d, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            sign = -sign
        p += 1
    if m > 1:
        sign = -sign
    return sign


def mobius_sieve(n: int) -> np.ndarray:
    """Array ``mu`` with ``mu[d]`` the Möbius value for 0 < d <= n (``mu[0] = 0``)."""
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, n + 1):
        if not is_prime[p]:
            continue
        is_prime[2 * p :: p] = False
        mu[p::p] *= -1
        if p * p <= n:
            mu[p * p :: p * p] = 0
    return mu


@lru_cache(maxsize=None)
def _cyclotomic_body(t: int) -> fmpq_poly:
    poly = fmpq_poly([-1] + [0] * (t - 1) + [1])
    for d in divisors(t)[:-1]:
        poly = poly // _cyclotomic_body(d)
    return poly


def cyclotomic(t: int) -> LaurentPoly:
    """The t-th cyclotomic polynomial, by exact division of x^t - 1."""
    _require_positive("t", t)
    return LaurentPoly.from_flint(_cyclotomic_body(t))


def _product(indices_with_multiplicity) -> LaurentPoly:
    body = fmpq_poly([1])
    for t, m in indices_with_multiplicity:
        if m:
            body = body * _cyclotomic_body(t) ** m
    return LaurentPoly.from_flint(body)


def dn_poly(n: int) -> LaurentPoly:
    """d_n(x) = prod_{t <= n} phi_t(x)."""
    _require_positive("n", n)
    return _product((t, 1) for t in range(1, n + 1))


def delta_poly(n: int) -> LaurentPoly:
    """Delta_n(x) = prod of phi_t(x) over odd t <= 2n - 1."""
    _require_positive("n", n)
    return _product((t, 1) for t in range(1, 2 * n, 2))


def varphi_multiplicities(n: int) -> dict[int, int]:
    return {2 * k: n // k for k in range(1, n + 1)}


def varphi_poly(n: int) -> LaurentPoly:
    """varphi_n(x) = prod_{k=1}^{n} phi_{2k}(x)^{floor(n/k)}."""
    _require_positive("n", n)
    return _product(varphi_multiplicities(n).items())


def ord_cyclotomic(p: LaurentPoly, t: int) -> int:
    """Largest e such that phi_t^e divides p."""
    _require_positive("t", t)
    p = LaurentPoly.coerce(p)
    if p.is_zero():
        raise ValueError("order of the zero polynomial is infinite")
    phi = LaurentPoly.from_flint(_cyclotomic_body(t))
    e = 0
    while True:
        quo, exact = p.divmod_exact(phi)
        if not exact:
            return e
        p, e = quo, e + 1


def cyclotomic_value(t: int, x) -> Fraction:
    """Exact phi_t(x) at a rational x via prod_{d|t} (x^{t/d} - 1)^{mu(d)}."""
    _require_positive("t", t)
    x = to_fraction(x)
    if x in (1, -1):
        return cyclotomic(t)(x)
    num, den = Fraction(1), Fraction(1)
    for d in divisors(t):
        mu = mobius(d)
        if mu == 1:
            num *= x ** (t // d) - 1
        elif mu == -1:
            den *= x ** (t // d) - 1
    return num / den


def product_of(polys) -> LaurentPoly:
    return reduce(operator.mul, polys, LaurentPoly.constant(1))
