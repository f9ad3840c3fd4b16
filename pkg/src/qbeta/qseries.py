"""High-precision evaluation of the q-series: beta_q, Y_s, L_s, theta, S_n.

Every evaluator takes ``prec`` (bits) explicitly and returns an ``HPReal``
holding the value together with a bound on the truncation error.  Values
are ``mpmath.mpf`` computed under ``mpmath.workprec``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

import mpmath
import numpy as np

from .algebra.combinatorics import c_stirling
from .algebra.laurent import to_fraction

DEFAULT_PREC = 256
LIMIT_PREC = 512
GUARD_BITS = 32

QValue = Union[Fraction, int, str, mpmath.mpf]


@dataclass(frozen=True)
class HPReal:
    value: mpmath.mpf
    error: mpmath.mpf
    prec: int

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return to_decimal(self.value, self.prec)


def to_decimal(x, prec: int) -> str:
    digits = max(15, int(prec * math.log10(2)))
    with mpmath.workprec(prec + GUARD_BITS):
        return mpmath.nstr(mpmath.mpf(x), digits, strip_zeros=False)


@dataclass(frozen=True)
class QPoint:
    """A real base point q with |q| != 1."""

    q: Union[Fraction, mpmath.mpf]

    @classmethod
    def of(cls, q: QValue) -> "QPoint":
        if isinstance(q, QPoint):
            return q
        if isinstance(q, mpmath.mpf):
            return cls(q)
        if isinstance(q, float):
            return cls(Fraction(q))
        return cls(to_fraction(q))

    @property
    def inside_disk(self) -> bool:
        return abs(self.q) < 1

    @property
    def outside_disk(self) -> bool:
        return abs(self.q) > 1

    def mpf(self) -> mpmath.mpf:
        """Value at the ambient working precision."""
        if isinstance(self.q, Fraction):
            return mpmath.mpf(self.q.numerator) / self.q.denominator
        return mpmath.mpf(self.q)

    def is_exact(self) -> bool:
        return isinstance(self.q, Fraction)


def _inside(q: QValue, allow_zero: bool = False) -> QPoint:
    p = QPoint.of(q)
    if not abs(p.q) < 1:
        raise ValueError(f"need |q| < 1, got q={p.q}")
    if p.q == 0 and not allow_zero:
        raise ValueError("need q != 0")
    return p


def _not_unit(q: QValue) -> QPoint:
    p = QPoint.of(q)
    if abs(p.q) == 1:
        raise ValueError("|q| = 1 is outside every convergence domain")
    if p.q == 0:
        raise ValueError("need q != 0")
    return p


def _result(value, error, prec: int) -> HPReal:
    return HPReal(+value, mpmath.mpf(error), prec)


# -- beta_q -------------------------------------------------------------------


def _beta_terms_needed(s: int, aq: float, bits: int) -> int:
    """Smallest K with 2 * sum_{k>K} k^{s-1} |q|^k below 2^-bits."""
    log_q = math.log(aq)
    target = -bits * math.log(2) - math.log(2)
    k = 1
    while True:
        ratio = ((k + 2) / (k + 1)) ** (s - 1) * aq
        if ratio < 1:
            log_next = (s - 1) * math.log(k + 1) + (k + 1) * log_q
            if log_next - math.log1p(-ratio) < target:
                return k
        k += 1


def _chi(m: int) -> int:
    return 0 if m % 2 == 0 else (1 if m % 4 == 1 else -1)


def divisor_character_coefficients(s: int, K: int) -> list[int]:
    """a_k = sum_{d | k} chi(k/d) d^{s-1} for 0 <= k <= K (a_0 = 0)."""
    big = (K ** (s - 1)) * (math.log(K + 1) + 2) > 2 ** 62
    dtype = object if big else np.int64
    pw = np.array([d ** (s - 1) for d in range(K + 1)], dtype=dtype)
    a = np.zeros(K + 1, dtype=dtype)
    for m in range(1, K + 1, 2):
        cnt = K // m
        if _chi(m) == 1:
            a[m::m] += pw[1 : cnt + 1]
        else:
            a[m::m] -= pw[1 : cnt + 1]
    return [int(v) for v in a]


def beta_q(s: int, q: QValue, prec: int = DEFAULT_PREC) -> HPReal:
    """beta_q(s) = sum_k k^{s-1} q^k / (1 + q^{2k}), for 0 < |q| < 1.

    Both the divisor-sum power series and the Lambert-type form are summed;
    the power-series value is returned once the two agree.
    """
    if s < 1:
        raise ValueError("s must be a positive integer")
    p = _inside(q)
    wp = prec + GUARD_BITS
    K = _beta_terms_needed(s, float(abs(p.q)), wp)
    coeffs = divisor_character_coefficients(s, K)
    with mpmath.workprec(wp):
        x = p.mpf()
        power_series = mpmath.mpf(0)
        lambert = mpmath.mpf(0)
        xk = mpmath.mpf(1)
        for k in range(1, K + 1):
            xk *= x
            if coeffs[k]:
                power_series += coeffs[k] * xk
            lambert += k ** (s - 1) * xk / (1 + xk * xk)
        tol = mpmath.ldexp(1, -prec + 16) * max(1, abs(power_series))
        if abs(power_series - lambert) > tol:
            raise ArithmeticError(
                f"beta_q summation forms disagree: {power_series} vs {lambert}"
            )
        return _result(power_series, mpmath.ldexp(1, -wp), prec)


def beta_q_lambert(s: int, q: QValue, prec: int = DEFAULT_PREC) -> HPReal:
    """Only the k^{s-1} q^k / (1 + q^{2k}) form (used for cross-checks)."""
    p = _inside(q)
    wp = prec + GUARD_BITS
    K = _beta_terms_needed(s, float(abs(p.q)), wp)
    with mpmath.workprec(wp):
        x = p.mpf()
        acc = mpmath.mpf(0)
        xk = mpmath.mpf(1)
        for k in range(1, K + 1):
            xk *= x
            acc += k ** (s - 1) * xk / (1 + xk * xk)
        return _result(acc, mpmath.ldexp(1, -wp), prec)


# -- Y_s, L_s, theta ----------------------------------------------------------


def Y_s(s: int, q: QValue, prec: int = DEFAULT_PREC) -> HPReal:
    """Y_s(q) = sum_{k>=0} (-1)^k q^{2k+1} / (1 - q^{2k+1})^s, |q| != 1."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    p = _not_unit(q)
    if p.outside_disk and s == 1:
        raise ValueError("Y_1 diverges for |q| > 1")
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        x = p.mpf()
        outside = p.outside_disk
        if outside:
            x = 1 / x
        eps = mpmath.ldexp(1, -wp)
        acc = mpmath.mpf(0)
        x2 = x * x
        xm = x
        k = 0
        while True:
            if outside:
                # q^m / (1 - q^m)^s rewritten in p = 1/q
                t = (-1) ** s * xm ** (s - 1) / (1 - xm) ** s
            else:
                t = xm / (1 - xm) ** s
            term = t if k % 2 == 0 else -t
            acc += term
            if abs(term) < eps * max(1, abs(acc)):
                # alternating with decreasing magnitude: next term bounds the tail
                return _result(acc, abs(term), prec)
            xm *= x2
            k += 1


def L_s(s: int, z, q: QValue, prec: int = DEFAULT_PREC, sqrt_q=None) -> HPReal:
    """L_s(z; q) = sum_{k>=1} (-1)^{k+1} q^{k-1/2} / (1 - q^{k-1/2})^s z^{-k}.

    ``sqrt_q`` fixes the branch of q^{1/2}; by default the positive root of a
    positive q is used.
    """
    if s < 1:
        raise ValueError("s must be a positive integer")
    p = _not_unit(q)
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        qv = p.mpf()
        if sqrt_q is None:
            if qv < 0:
                raise ValueError("negative q needs an explicit sqrt_q")
            h = mpmath.sqrt(qv)
        else:
            h = QPoint.of(sqrt_q).mpf()
            if abs(h * h - qv) > mpmath.ldexp(abs(qv), -wp + 4):
                raise ValueError("sqrt_q**2 != q")
        zv = QPoint.of(z).mpf()
        if zv == 0:
            raise ValueError("z must be nonzero")
        if p.inside_disk:
            rho = abs(qv) / abs(zv)
        else:
            rho = abs(qv) ** (1 - s) / abs(zv)
        if rho >= 1:
            raise ValueError(f"L_{s} diverges at z={zv}, q={qv} (ratio {rho})")
        eps = mpmath.ldexp(1, -wp)
        acc = mpmath.mpf(0)
        hm = h  # h^{2k-1}
        zk = 1 / zv
        h2 = h * h
        k = 1
        while True:
            t = hm / (1 - hm) ** s * zk
            term = t if k % 2 == 1 else -t
            acc += term
            if abs(term) < eps * max(1, abs(acc)) and k > 2:
                # heuristic geometric tail with a safety factor, not a rigorous enclosure
                return _result(acc, abs(term) * rho / (1 - rho) * 4, prec)
            hm *= h2
            zk /= zv
            k += 1


def theta(q: QValue, prec: int = DEFAULT_PREC) -> HPReal:
    """theta(q) = 1 + 2 sum_{n>=1} q^{n^2}."""
    p = _inside(q, allow_zero=True)
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        x = p.mpf()
        if x == 0:
            return _result(mpmath.mpf(1), 0, prec)
        eps = mpmath.ldexp(1, -wp)
        acc = mpmath.mpf(1)
        n = 1
        while True:
            t = 2 * x ** (n * n)
            acc += t
            if abs(t) < eps:
                return _result(acc, 2 * abs(t), prec)
            n += 1


# -- classical values ---------------------------------------------------------


def alternating_sum(a, prec: int, start: int = 0) -> mpmath.mpf:
    """sum_{k>=0} (-1)^k a(start + k) by Cohen-Villegas-Zagier acceleration.

    ``a`` must be positive and decreasing with a totally monotone profile
    (rational functions of k with no poles to the right of ``start`` are fine).
    """
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp + 16):
        n = int(math.ceil((wp + 8) * math.log(2) / math.log(3 + math.sqrt(8)))) + 4
        d = (3 + mpmath.sqrt(8)) ** n
        d = (d + 1 / d) / 2
        b = mpmath.mpf(-1)
        c = -d
        acc = mpmath.mpf(0)
        for k in range(n):
            c = b - c
            acc += c * a(start + k)
            b = (k + n) * (k - n) * b / ((k + mpmath.mpf(1) / 2) * (k + 1))
        return acc / d


def dirichlet_beta(s: int, prec: int = DEFAULT_PREC) -> HPReal:
    """beta(s) = sum_{k>=0} (-1)^k / (2k+1)^s."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        value = alternating_sum(lambda k: mpmath.mpf(2 * k + 1) ** (-s), prec)
        return _result(value, mpmath.ldexp(1, -prec - 8), prec)


def euler_number(two_m: int) -> Fraction:
    """E_{2m} from 1/cosh z = sum E_k z^k / k!, via sum_k C(2m,2k) E_{2k} = 0."""
    if two_m < 0 or two_m % 2:
        raise ValueError("Euler numbers are requested at even nonnegative indices")
    m = two_m // 2
    E = [1]
    for i in range(1, m + 1):
        E.append(-sum(math.comb(2 * i, 2 * k) * E[k] for k in range(i)))
    return Fraction(E[m])


def beta_odd_closed_form(m: int, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """(-1)^m E_{2m} pi^{2m+1} / (2^{2m+2} (2m)!)."""
    E = euler_number(2 * m)
    with mpmath.workprec(prec + GUARD_BITS):
        return (
            (-1) ** m
            * mpmath.mpf(E.numerator)
            * mpmath.pi ** (2 * m + 1)
            / (mpmath.mpf(2) ** (2 * m + 2) * math.factorial(2 * m))
        )


# -- S_n ----------------------------------------------------------------------


def _check_form_params(n: int, A: int, r: int, require_odd_n: bool = True) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    if require_odd_n and n % 2 == 0:
        raise ValueError("n must be odd")
    if not isinstance(A, int) or A < 3 or A % 2 == 0:
        raise ValueError("A must be an odd integer >= 3")
    if not isinstance(r, int) or r < 1:
        raise ValueError("r must be a positive integer")
    if A - 2 * r <= 0:
        raise ValueError("need A > 2r")


def _root_power(root, e: Fraction):
    if e.denominator == 1:
        return root ** int(e)
    if root <= 0:
        raise ValueError("half-integer exponents need a positive root")
    return root ** (mpmath.mpf(e.numerator) / e.denominator)


def sn_term(k: int, n: int, A: int, r: int, root) -> mpmath.mpf:
    """rho_k: the k-th summand of S_n at base root**2 (no (Q;Q)_n prefactor)."""
    Q = root * root
    e = Fraction((2 * k - 1) * ((A - 2 * r) * n + A - 2), 2)
    num = 1 - Q ** (2 * k + n - 1)
    for i in range(r * n):
        num *= (1 - Q ** (k - r * n + i)) * (1 - Q ** (k + n + i))
    if num == 0:
        return mpmath.mpf(0)
    den = mpmath.mpf(1)
    for i in range(n + 1):
        den *= 1 - root ** (2 * k - 1 + 2 * i)
    sign = 1 if k % 2 == 1 else -1
    return sign * _root_power(root, e) * num / den ** A


def S_n_numeric(n: int, A: int, r: int, q: QValue, prec: int = DEFAULT_PREC,
                require_odd_n: bool = True) -> HPReal:
    """S_n at base q**2 (the argument is the square root of the base).

    Works for |q| < 1 and |q| > 1 by direct summation; terms with
    k <= r n vanish identically and are skipped.
    """
    _check_form_params(n, A, r, require_odd_n=require_odd_n)
    p = _not_unit(q)
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        root = p.mpf()
        Q = root * root
        pre = mpmath.mpf(1)
        for i in range(1, n + 1):
            pre *= 1 - Q ** i
        pre = pre ** (A - 2 * r)
        eps = mpmath.ldexp(1, -wp - 8)
        acc = mpmath.mpf(0)
        prev = None
        k = r * n + 1
        while True:
            term = sn_term(k, n, A, r, root)
            acc += term
            if prev is not None and prev != 0:
                ratio = abs(term / prev)
                if ratio < 0.5 and abs(term) < eps * abs(acc):
                    return _result(pre * acc, abs(pre * term), prec)
            prev = term
            k += 1
            if k > r * n + 100000:
                raise ArithmeticError("S_n summation did not converge")


def S_n_at_base(n: int, A: int, r: int, base: QValue, prec: int = DEFAULT_PREC) -> HPReal:
    """S_n(base) directly, for 0 < base < 1 (any parity of n)."""
    p = _inside(base)
    if p.q <= 0:
        raise ValueError("S_n_at_base takes a positive base (real square root)")
    with mpmath.workprec(prec + GUARD_BITS):
        root = mpmath.sqrt(p.mpf())
    return S_n_numeric(n, A, r, root, prec, require_odd_n=False)


# -- closed combinations of Y_s and beta_q ------------------------------------


def ys_from_beta(s: int, q: QValue, prec: int = DEFAULT_PREC) -> mpmath.mpf:
    """(1/(s-1)!) sum_{j=2}^{s} c(s-1, j-1) beta_q(j)."""
    with mpmath.workprec(prec + GUARD_BITS):
        acc = mpmath.mpf(0)
        for j in range(2, s + 1):
            acc += c_stirling(s - 1, j - 1) * beta_q(j, q, prec).value
        return acc / math.factorial(s - 1)
