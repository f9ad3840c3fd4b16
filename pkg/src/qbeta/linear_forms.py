"""Linear forms S_n(q^2) = P0hat(q^2) + sum_{j even} Pjhat(q^2) beta_q(j).

Everything symbolic lives at base ``q**2`` and is expressed in the variable
``q`` (the square root of the base), so no half-integer exponent survives.
The partial fractions of R_n(T; q^2) are obtained by a truncated Taylor
expansion of the co-factor at each pole ``T = q^{1-2j}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import mpmath

from .algebra import LaurentPoly, RatFunc, c_stirling, to_fraction
from .qseries import DEFAULT_PREC, GUARD_BITS, HPReal, QPoint, S_n_numeric, beta_q

SYMBOLIC_MAX_N = 5
SYMBOLIC_MAX_A = 7

_ONE = LaurentPoly.constant(1)


class EnvelopeError(RuntimeError):
    """Requested symbolic table lies outside the guaranteed feasibility envelope."""


def _x(e: int, c=1) -> LaurentPoly:
    return LaurentPoly.monomial(e, c)


@dataclass(frozen=True)
class FormParams:
    n: int
    A: int
    r: int

    def __post_init__(self):
        n, A, r = self.n, self.A, self.r
        for name, v in (("n", n), ("A", A), ("r", r)):
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError(f"{name} must be an integer")
        if n < 1 or n % 2 == 0:
            raise ValueError("n must be odd")
        if A < 3 or A % 2 == 0:
            raise ValueError("A must be an odd integer >= 3")
        if r < 1:
            raise ValueError("r must be a positive integer")
        if A - 2 * r <= 0:
            raise ValueError("need A > 2r")

    @property
    def t_exponent(self) -> int:
        """Power of T in R_n(T; q^2)."""
        return ((self.A - 2 * self.r) * self.n + self.A - 4) // 2

    @property
    def q_exponent(self) -> int:
        """Power of q in the constant prefactor of R_n(T; q^2)."""
        n, A, r = self.n, self.A, self.r
        return -A * (n * n - 1) - ((A - 2 * r) * n + A - 2) // 2

    @property
    def linear_exponents(self) -> list[int]:
        """Exponents a of the numerator factors (1 - q^a T)."""
        n, r = self.n, self.r
        return [2 * (-r * n + i) for i in range(r * n)] + [2 * (n + i) for i in range(r * n)]

    @property
    def pole_exponents(self) -> list[int]:
        return [1 - 2 * j for j in range(self.n + 1)]

    @property
    def even_indices(self) -> list[int]:
        return list(range(2, self.A, 2))

    def within_envelope(self) -> bool:
        return self.n <= SYMBOLIC_MAX_N and self.A <= SYMBOLIC_MAX_A

    def key(self) -> str:
        return f"n{self.n}_A{self.A}_r{self.r}"


def _poch_base_q2(k: int) -> LaurentPoly:
    """(q^2; q^2)_k in the variable q."""
    out = _ONE
    for i in range(1, k + 1):
        out = out * (_ONE - _x(2 * i))
    return out


# -- R_n ----------------------------------------------------------------------


@dataclass(frozen=True)
class RnData:
    """R_n(T; q^2) = prefactor * T^t_exponent * numerator(T) / prod_j (T - q^{e_j})^A."""

    params: FormParams
    prefactor: LaurentPoly
    t_exponent: int
    numerator: tuple  # LaurentPoly coefficients of T^0, T^1, ...
    poles: tuple  # (q-exponent of the pole, multiplicity)

    @property
    def t_degree(self) -> int:
        return self.t_exponent + len(self.numerator) - 1 - sum(m for _, m in self.poles)

    def evaluate(self, T) -> RatFunc:
        T = RatFunc.coerce(T)
        acc = RatFunc(0)
        Tk = RatFunc(1)
        for coeff in self.numerator:
            acc = acc + Tk * coeff
            Tk = Tk * T
        den = RatFunc(1)
        for e, m in self.poles:
            den = den * (T - RatFunc(_x(e))) ** m
        return acc * RatFunc(self.prefactor) * T ** self.t_exponent / den


def rn_data(params: FormParams) -> RnData:
    prefactor = _x(params.q_exponent) * _poch_base_q2(params.n) ** (params.A - 2 * params.r)
    # numerator polynomial in T: prod_a (1 - q^a T)
    coeffs = [_ONE]
    for a in params.linear_exponents:
        new = [LaurentPoly() for _ in range(len(coeffs) + 1)]
        for i, c in enumerate(coeffs):
            new[i] = new[i] + c
            new[i + 1] = new[i + 1] - c.shifted(a)
        coeffs = new
    poles = tuple((e, params.A) for e in params.pole_exponents)
    return RnData(params, prefactor, params.t_exponent, tuple(coeffs), poles)


# -- partial fractions --------------------------------------------------------


def _series_mul(a: list, b: list, length: int) -> list:
    out = [LaurentPoly() for _ in range(length)]
    for i, ai in enumerate(a[:length]):
        if ai.is_zero():
            continue
        for k, bk in enumerate(b[: length - i]):
            out[i + k] = out[i + k] + ai * bk
    return out


@dataclass(frozen=True)
class PfcTable:
    params: FormParams
    c: Mapping  # (s, j) -> RatFunc
    d: Mapping  # (s, j) -> RatFunc


def _pole_expansion(params: FormParams, j: int) -> list[RatFunc]:
    """Taylor coefficients of R_n(T)(T - p_j)^A at T = p_j, in u = T - p_j."""
    n, A = params.n, params.A
    L = A
    pe = 1 - 2 * j  # p_j = q^pe
    eT = params.t_exponent
    # V(p(1+w)) = K (1+w)^eT prod_a (alpha_a + beta_a w) / prod_{i != j} p^A (d_i + w)^A
    K = _x(params.q_exponent + pe * (eT - n * A)) * _poch_base_q2(n) ** (A - 2 * params.r)
    num = [K * _ONE.scale(math.comb(eT, m)) for m in range(L)]
    for a in params.linear_exponents:
        num = _series_mul(num, [_ONE - _x(a + pe), -_x(a + pe)], L)
    # P(w) = prod_{i != j} (d_i + w)^A, d_i = 1 - q^{2(j - i)}
    P = [_ONE] + [LaurentPoly() for _ in range(L - 1)]
    for i in range(n + 1):
        if i == j:
            continue
        di = _ONE - _x(2 * (j - i))
        factor = [di ** (A - m) * math.comb(A, m) for m in range(min(A, L - 1) + 1)]
        P = _series_mul(P, factor, L)
    P0 = P[0]
    # 1/P = sum_m N_m / P0^{m+1} w^m
    N = [_ONE]
    for m in range(1, L):
        acc = LaurentPoly()
        P0pow = _ONE
        for k in range(1, m + 1):
            acc = acc - P[k] * N[m - k] * P0pow
            P0pow = P0pow * P0
        N.append(acc)
    out = []
    P0pows = [_ONE]
    for _ in range(L):
        P0pows.append(P0pows[-1] * P0)
    for m in range(L):
        acc = LaurentPoly()
        for k in range(m + 1):
            acc = acc + num[k] * N[m - k] * P0pows[k]
        coeff_w = RatFunc(acc, P0pows[m + 1])
        # [u^m] = p^{-m} [w^m]
        out.append(coeff_w.shifted(-pe * m))
    return out


def partial_fractions(params: FormParams, force: bool = False) -> PfcTable:
    """Exact c_{s,j,n}(q^2) and d_{s,j,n}(q^2) for s in 1..A, j in 0..n."""
    if not force and not params.within_envelope():
        raise EnvelopeError(
            f"symbolic tables are guaranteed only for n <= {SYMBOLIC_MAX_N}, "
            f"A <= {SYMBOLIC_MAX_A}; got {params}"
        )
    A = params.A
    c, d = {}, {}
    for j in range(params.n + 1):
        taylor = _pole_expansion(params, j)
        for s in range(1, A + 1):
            csj = taylor[A - s]
            c[s, j] = csj
            sign = -1 if s % 2 else 1
            d[s, j] = csj.shifted((2 * j - 1) * s) * sign
    return PfcTable(params, c, d)


def reconstruction_check(table: PfcTable, rn: RnData | None = None) -> bool:
    """sum_{s,j} c_{s,j}/(T - p_j)^s == R_n(T) as rational functions of T.

    Both sides times prod (T - p_j)^A are polynomials in T of degree below
    A(n+1), so agreement at A(n+1) integer points proves equality.
    """
    params = table.params
    rn = rn or rn_data(params)
    npts = params.A * (params.n + 1)
    for t in range(2, 2 + npts):
        lhs = RatFunc(0)
        for j, pe in enumerate(params.pole_exponents):
            base = RatFunc(_ONE.scale(t) - _x(pe))
            inv = base.inverse()
            acc = inv
            for s in range(1, params.A + 1):
                lhs = lhs + table.c[s, j] * acc
                acc = acc * inv
        if lhs != rn.evaluate(t):
            return False
    return True


def check_c_symmetry(table: PfcTable) -> bool:
    """c_{s,n-j}(1/Q) = -Q^{n(s+r-2)+1-s} c_{s,j}(Q), Q = q^2."""
    n, A, r = table.params.n, table.params.A, table.params.r
    for (s, j), csj in table.c.items():
        lhs = table.c[s, n - j].reciprocal_variable()
        rhs = -csj.shifted(2 * (n * (s + r - 2) + 1 - s))
        if lhs != rhs:
            return False
    return True


def check_d_symmetry(table: PfcTable) -> bool:
    """d_{s,n-j}(1/Q) = -Q^{n(r-2)+1} d_{s,j}(Q), Q = q^2."""
    n, r = table.params.n, table.params.r
    for (s, j), dsj in table.d.items():
        lhs = table.d[s, n - j].reciprocal_variable()
        if lhs != -dsj.shifted(2 * (n * (r - 2) + 1)):
            return False
    return True


# -- P polynomials and the linear form ----------------------------------------


@dataclass(frozen=True)
class PPolys:
    params: FormParams
    P0_at_1: RatFunc
    P_s_at_1: Mapping  # s -> RatFunc
    P_s_poly: Mapping  # s -> tuple of z-coefficients (index = power of z)


def p_polynomials(params: FormParams, table: PfcTable) -> PPolys:
    n, A = params.n, params.A
    P_s_poly = {}
    P_s_at_1 = {}
    for s in range(1, A + 1):
        coeffs = tuple(
            table.d[s, j].shifted(1 - 2 * j) * (-1 if j % 2 else 1) for j in range(n + 1)
        )
        P_s_poly[s] = coeffs
        total = RatFunc(0)
        for cf in coeffs:
            total = total + cf
        P_s_at_1[s] = total
    P0 = RatFunc(0)
    for s in range(1, A + 1):
        for k in range(1, n + 1):
            inner = RatFunc(0)
            for j in range(k, n + 1):
                term = table.d[s, j].shifted(2 * (k - j))
                inner = inner + (term if (j + k) % 2 == 0 else -term)
            if inner.is_zero():
                continue
            P0 = P0 + inner / RatFunc(_ONE - _x(2 * k - 1)) ** s
    return PPolys(params, P0, P_s_at_1, P_s_poly)


def check_z_symmetry(pp: PPolys) -> bool:
    """P_s(1/z, 1/Q) = z^{-n} Q^{n(r-1)} P_s(z, Q) coefficientwise."""
    n, r = pp.params.n, pp.params.r
    for coeffs in pp.P_s_poly.values():
        if len(coeffs) != n + 1:
            return False
        for m in range(n + 1):
            lhs = coeffs[m].reciprocal_variable()  # coefficient of z^{-m}
            rhs = coeffs[n - m].shifted(2 * n * (r - 1))
            if lhs != rhs:
                return False
    return True


@dataclass(frozen=True)
class LinearFormBundle:
    params: FormParams
    phat0: RatFunc
    phat: Mapping  # even j -> RatFunc

    def coefficients(self) -> dict[int, RatFunc]:
        return {0: self.phat0, **self.phat}


def phat_coeffs(params: FormParams, table: PfcTable, pp: PPolys | None = None) -> LinearFormBundle:
    pp = pp or p_polynomials(params, table)
    n, A, r = params.n, params.A, params.r
    half = Fraction(1, 2)
    phat0 = (
        pp.P0_at_1
        + pp.P0_at_1.reciprocal_variable().shifted(-2 * n * (r - 1))
        - pp.P_s_at_1[1] * half
    )
    phat = {}
    for j in params.even_indices:
        acc = RatFunc(0)
        for s in range(j, A + 1):
            w = Fraction(2 * c_stirling(s - 1, j - 1), math.factorial(s - 1))
            acc = acc + pp.P_s_at_1[s] * w
        phat[j] = acc
    return LinearFormBundle(params, phat0, phat)


def build_bundle(params: FormParams, force: bool = False):
    """Convenience: (table, ppolys, bundle) for one parameter cell."""
    table = partial_fractions(params, force=force)
    pp = p_polynomials(params, table)
    return table, pp, phat_coeffs(params, table, pp)


def _exact_to_mpf(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def verify_identity(params: FormParams, bundle: LinearFormBundle, q,
                    prec: int = DEFAULT_PREC) -> HPReal:
    """|S_n(q^2) - P0hat(q^2) - sum_j Pjhat(q^2) beta_q(j)| at precision ``prec``."""
    qp = QPoint.of(q)
    if not (0 < abs(qp.q) < 1):
        raise ValueError("need 0 < |q| < 1")
    sn = S_n_numeric(params.n, params.A, params.r, qp.q, prec)
    wp = prec + GUARD_BITS
    with mpmath.workprec(wp):
        if qp.is_exact():
            rhs = _exact_to_mpf(bundle.phat0(qp.q))
        else:
            rhs = bundle.phat0(qp.mpf())
        err = sn.error
        for j, coeff in bundle.phat.items():
            b = beta_q(j, qp.q, prec)
            cj = _exact_to_mpf(coeff(qp.q)) if qp.is_exact() else coeff(qp.mpf())
            rhs += cj * b.value
            err += abs(cj) * b.error
        return HPReal(abs(sn.value - rhs), err, prec)


# -- numeric partial fractions (fixed q) --------------------------------------


def numeric_partial_fractions(params: FormParams, root, prec: int) -> dict:
    """d_{s,j,n} at base root**2 as mpf values, via log-derivative expansion.

    Same Taylor expansion as the symbolic path, carried out in floating point;
    usable far outside the symbolic envelope.
    """
    n, A, r = params.n, params.A, params.r
    eT = params.t_exponent
    d = {}
    with mpmath.workprec(prec):
        x = mpmath.mpf(root)
        K0 = x ** params.q_exponent
        for i in range(1, n + 1):
            K0 *= (1 - x ** (2 * i)) ** (A - 2 * r)
        lin = params.linear_exponents
        for j in range(n + 1):
            pe = 1 - 2 * j
            p = x ** pe
            V0 = K0 * p ** (eT - n * A)
            psum = [mpmath.mpf(eT)] * A  # index m: sum of m-th powers
            ratios = []
            for a in lin:
                xa_p = x ** (a + pe)
                alpha = 1 - xa_p
                V0 *= alpha
                ratios.append(-xa_p / alpha)
            inv_d = []
            for i in range(n + 1):
                if i == j:
                    continue
                di = 1 - x ** (2 * (j - i))
                V0 /= di ** A
                inv_d.append(1 / di)
            for m in range(1, A):
                s_lin = mpmath.fsum(u ** m for u in ratios)
                s_pole = mpmath.fsum(v ** m for v in inv_d)
                psum[m] = eT + s_lin - A * s_pole
            ell = [mpmath.mpf(0)] + [
                (1 if m % 2 else -1) * psum[m] / m for m in range(1, A)
            ]
            E = [mpmath.mpf(1)]
            for m in range(1, A):
                E.append(mpmath.fsum(k * ell[k] * E[m - k] for k in range(1, m + 1)) / m)
            for s in range(1, A + 1):
                m = A - s
                csj = V0 * E[m] * p ** (-m)
                d[s, j] = (-1) ** s * x ** ((2 * j - 1) * s) * csj
    return d


def _numeric_P(params: FormParams, d: dict, x) -> tuple:
    n, A = params.n, params.A
    P_s = {}
    for s in range(1, A + 1):
        P_s[s] = mpmath.fsum(
            (-1) ** j * x ** (1 - 2 * j) * d[s, j] for j in range(n + 1)
        )
    terms = []
    for s in range(1, A + 1):
        for k in range(1, n + 1):
            w = (1 - x ** (2 * k - 1)) ** (-s)
            for j in range(k, n + 1):
                terms.append((-1) ** (j + k) * x ** (2 * (k - j)) * d[s, j] * w)
    return mpmath.fsum(terms), P_s


def numeric_phat(params: FormParams, root, prec: int = DEFAULT_PREC) -> dict:
    """P0hat and Pjhat at base root**2 in floating point: {j: mpf}."""
    n, A, r = params.n, params.A, params.r
    with mpmath.workprec(prec):
        x = mpmath.mpf(root)
        d = numeric_partial_fractions(params, x, prec)
        d_inv = numeric_partial_fractions(params, 1 / x, prec)
        P0, P_s = _numeric_P(params, d, x)
        P0_inv, _ = _numeric_P(params, d_inv, 1 / x)
        out = {0: P0 + x ** (-2 * n * (r - 1)) * P0_inv - P_s[1] / 2}
        for j in params.even_indices:
            out[j] = mpmath.fsum(
                mpmath.mpf(2 * c_stirling(s - 1, j - 1)) / math.factorial(s - 1) * P_s[s]
                for s in range(j, A + 1)
            )
        return out
