"""Growth rates (1/n^2) log|x_n| and the dimension bounds f, g.

Cyclotomic products are never expanded here: log|phi_t(x)| comes from the
Möbius form sum_{d|t} mu(d) log|x^{t/d} - 1|, so n in the hundreds is cheap.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .algebra import divisors, mobius_sieve, to_fraction
from .linear_forms import FormParams, numeric_phat
from .qseries import DEFAULT_PREC, GUARD_BITS, HPReal, QPoint, S_n_at_base, to_decimal

RATE_PREC = 128


@dataclass
class RateSeries:
    label: str
    ns: list
    values: list  # mpf
    limit: mpmath.mpf
    kind: str = "limit"  # "limit" or "upper" (one-sided bound)
    prec: int = RATE_PREC

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.ns, self.ns[1:])):
            raise ValueError("grid must be strictly increasing")
        if len(self.ns) != len(self.values):
            raise ValueError("grid and values differ in length")

    def deviation(self, i: int = -1):
        return self.values[i] - self.limit

    def relative_deviation(self, i: int = -1):
        return abs(self.deviation(i)) / abs(self.limit)

    def within(self, rel_tol: float, i: int = -1) -> bool:
        return bool(self.relative_deviation(i) < rel_tol)

    def respects_upper(self, slack: float, n_min: int = 0) -> bool:
        cap = self.limit * (1 + slack)
        return all(v <= cap for n, v in zip(self.ns, self.values) if n >= n_min)

    def trend_ok(self) -> bool:
        """|value(n_max) - limit| < |value near n_max/4 - limit|."""
        target = self.ns[-1] / 4
        i = min(range(len(self.ns)), key=lambda k: abs(self.ns[k] - target))
        return abs(self.deviation(-1)) < abs(self.deviation(i))

    def fitted_slope(self):
        """Slope of n * (value - limit) over the last two grid points."""
        if len(self.ns) < 2:
            return None
        (n1, n2), (v1, v2) = self.ns[-2:], self.values[-2:]
        return (n2 * (v2 - self.limit) - n1 * (v1 - self.limit)) / (n2 - n1)

    def rows(self):
        for n, v in zip(self.ns, self.values):
            yield n, to_decimal(v, self.prec), to_decimal(self.limit, self.prec), to_decimal(v - self.limit, self.prec)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "value", "limit", "deviation"])
        w.writerows(self.rows())
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "kind": self.kind,
            "precision_bits": self.prec,
            "limit": to_decimal(self.limit, self.prec),
            "rows": [dict(zip(("n", "value", "limit", "deviation"), r)) for r in self.rows()],
        }


def _log_inv_q(q) -> mpmath.mpf:
    p = QPoint.of(q)
    if not p.inside_disk:
        raise ValueError("need 0 < |q| < 1")
    return -mpmath.log(abs(p.mpf()))


# -- S_n ------------------------------------------------------------------------


def rate_Sn(q, A: int, r: int, n_grid: Sequence[int], prec: int = DEFAULT_PREC) -> RateSeries:
    """(1/n^2) log|S_n(q)| at base q; any parity of n."""
    with mpmath.workprec(prec):
        L = _log_inv_q(q)
        vals = []
        for n in n_grid:
            s = S_n_at_base(n, A, r, q, prec)
            vals.append(mpmath.log(abs(s.value)) / n**2)
        limit = -mpmath.mpf(r * (A - 2 * r)) / 2 * L
    return RateSeries(f"Sn(A={A},r={r})", list(n_grid), vals, limit, prec=RATE_PREC)


# -- cyclotomic products ----------------------------------------------------------


class CyclotomicLogs:
    """log|phi_t(x)| for t <= t_max at a fixed |x| > 1."""

    def __init__(self, x, t_max: int, prec: int = RATE_PREC):
        self.prec = prec
        with mpmath.workprec(prec + GUARD_BITS):
            x = mpmath.mpf(x)
            if abs(x) <= 1:
                raise ValueError("need |x| > 1")
            lx = mpmath.log(abs(x))
            # log|x^m - 1| = m log|x| + log|1 - x^{-m}|
            L = [mpmath.mpf(0)] + [m * lx + mpmath.log(abs(1 - x ** (-m))) for m in range(1, t_max + 1)]
            mu = mobius_sieve(t_max)
            self.log_phi = [mpmath.mpf(0)] * (t_max + 1)
            for t in range(1, t_max + 1):
                self.log_phi[t] = mpmath.fsum(int(mu[d]) * L[t // d] for d in divisors(t) if mu[d])

    def dn(self, n: int):
        return mpmath.fsum(self.log_phi[1 : n + 1])

    def delta(self, n: int):
        return mpmath.fsum(self.log_phi[1 : 2 * n : 2])

    def varphi(self, n: int):
        return mpmath.fsum((n // k) * self.log_phi[2 * k] for k in range(1, n + 1))


def rate_denominator_pieces(q, n_grid: Sequence[int], prec: int = RATE_PREC) -> dict[str, RateSeries]:
    ns = list(n_grid)
    with mpmath.workprec(prec + GUARD_BITS):
        L = _log_inv_q(q)
        logs = CyclotomicLogs(1 / QPoint.of(q).mpf(), 2 * max(ns), prec)
        out = {
            "dn": RateSeries("dn", ns, [logs.dn(n) / n**2 for n in ns], 3 / mpmath.pi**2 * L, prec=prec),
            "Delta": RateSeries("Delta", ns, [logs.delta(n) / n**2 for n in ns], 8 / mpmath.pi**2 * L, prec=prec),
            "varphi": RateSeries("varphi", ns, [logs.varphi(n) / n**2 for n in ns], mpmath.mpf(2) / 3 * L, prec=prec),
        }
    return out


def denominator_constant(A: int, r: int, with_delta: bool = True):
    """Coefficient of log|1/q| in the D_n (or D~_n) growth rate."""
    c = mpmath.mpf(A) / 4 + r * r + 12 / mpmath.pi**2 * (A - 1) + mpmath.mpf(4 * r) / 3
    if with_delta:
        c += 8 / mpmath.pi**2
    return c


def log_Dn(params: FormParams, q, logs: CyclotomicLogs | None = None, with_delta: bool = True):
    """log|D_n(q)| assembled factor by factor."""
    from .denominators import DenomSpec

    n, A, r = params.n, params.A, params.r
    spec = DenomSpec.default(params)
    logs = logs or CyclotomicLogs(1 / QPoint.of(q).mpf(), 2 * n)
    L = _log_inv_q(q)
    total = (
        mpmath.log(math.factorial(A - 1))
        - spec.q_exponent * L
        + 2 * r * logs.varphi(n)
        + (A - 1) * logs.dn(2 * n)
    )
    if with_delta:
        total += logs.delta(n)
    return total


def rate_Dn(A: int, r: int, q, n_grid: Sequence[int], prec: int = RATE_PREC) -> RateSeries:
    ns = list(n_grid)
    with mpmath.workprec(prec + GUARD_BITS):
        L = _log_inv_q(q)
        logs = CyclotomicLogs(1 / QPoint.of(q).mpf(), 2 * max(ns), prec)
        vals = [log_Dn(FormParams(n, A, r), q, logs) / n**2 for n in ns]
        limit = denominator_constant(A, r) * L
    return RateSeries(f"Dn(A={A},r={r})", ns, vals, limit, prec=prec)


# -- linear-form coefficients ----------------------------------------------------


def rate_phat(A: int, r: int, q, n_grid: Sequence[int], prec: int = DEFAULT_PREC) -> RateSeries:
    """(1/n^2) log max_j |Phat_{j,n}(q)| via numeric partial fractions; an upper-bound series."""
    ns = list(n_grid)
    with mpmath.workprec(prec + GUARD_BITS):
        L = _log_inv_q(q)
        root = mpmath.sqrt(QPoint.of(q).mpf())
        vals = []
        for n in ns:
            coeffs = numeric_phat(FormParams(n, A, r), root, prec)
            vals.append(max(mpmath.log(abs(v)) for v in coeffs.values()) / n**2)
        bound = mpmath.mpf(A + 4 * r * r) / 8 * L
    return RateSeries(f"Phat(A={A},r={r})", ns, vals, bound, kind="upper", prec=RATE_PREC)


# -- Möbius sums -------------------------------------------------------------------


def mobius_partial_sums(n: int, prec: int = 64) -> tuple[HPReal, HPReal]:
    """(sum over odd d <= n, sum over even d <= n) of mu(d)/d^2."""
    if n < 1:
        raise ValueError("n must be positive")
    mu = mobius_sieve(n).astype(np.float64)
    d = np.arange(n + 1, dtype=np.float64)
    d[0] = 1.0
    terms = mu / (d * d)
    odd = math.fsum(terms[1::2])
    even = math.fsum(terms[2::2])
    err = mpmath.mpf(n) * 2.0**-52
    with mpmath.workprec(prec):
        return HPReal(mpmath.mpf(odd), err, prec), HPReal(mpmath.mpf(even), err, prec)


# -- bounds ----------------------------------------------------------------------


@dataclass(frozen=True)
class BoundResult:
    A: int
    r: int
    value: mpmath.mpf
    kind: str

    def __float__(self):
        return float(self.value)


def _check_bound_args(kind: str, r: int | None, A: int) -> None:
    if kind not in ("f", "g"):
        raise ValueError("kind must be 'f' or 'g'")
    if A < 3 or A % 2 == 0:
        raise ValueError("A must be an odd integer >= 3")
    if r is not None and not (1 <= r and 2 * r < A):
        raise ValueError("need 1 <= r < A/2")


def _bound_formula(kind: str, r, A):
    pi2 = mpmath.pi**2
    const = -16 / pi2 if kind == "f" else -48 / pi2
    num = 4 * r * A + A - 4 * r * r
    den = (48 / pi2 + 2) * A + 8 * r * r + const + mpmath.mpf(16) * r / 3
    return num / den


def bound(kind: str, r: int, A: int, prec: int = DEFAULT_PREC) -> BoundResult:
    _check_bound_args(kind, r, A)
    with mpmath.workprec(prec):
        return BoundResult(A, r, +_bound_formula(kind, mpmath.mpf(r), mpmath.mpf(A)), kind)


def bound_max(kind: str, A: int, prec: int = DEFAULT_PREC) -> BoundResult:
    """Exhaustive maximum over 1 <= r < A/2 (float screen, then exact re-ranking)."""
    _check_bound_args(kind, None, A)
    rs = np.arange(1, (A - 1) // 2 + 1, dtype=np.float64)
    pi2 = math.pi**2
    const = -16 / pi2 if kind == "f" else -48 / pi2
    vals = (4 * rs * A + A - 4 * rs * rs) / ((48 / pi2 + 2) * A + 8 * rs * rs + const + 16 * rs / 3)
    top = np.argsort(vals)[-4:]
    cands = [bound(kind, int(rs[i]), A, prec) for i in top]
    return max(cands, key=lambda b: (b.value, -b.r))


def asymptotic_constant():
    return mpmath.pi / (2 * mpmath.sqrt(mpmath.pi**2 + 24))


def nesterenko_bound(alpha1, alpha2):
    """Dimension lower bound 1 + alpha1/alpha2."""
    if alpha2 <= 0:
        raise ValueError("alpha2 must be positive")
    return 1 + mpmath.mpf(alpha1) / alpha2


def assemble_alphas(A: int, r: int, q=Fraction(1, 2), with_delta: bool = True):
    """(alpha1, alpha2) for the sequences D_n(q) Phat_{j,n}(q^2).

    The linear form decays like S_n(q^2) and the coefficients grow like the
    rate of Phat at base q^2, i.e. twice the base-q rate.
    """
    L = _log_inv_q(q)
    cD = denominator_constant(A, r, with_delta)
    alpha1 = (r * (A - 2 * r) - cD) * L
    alpha2 = (mpmath.mpf(A + 4 * r * r) / 4 + cD) * L
    return alpha1, alpha2


def bounds_table(kind: str, A_max: int, prec: int = DEFAULT_PREC) -> list[BoundResult]:
    return [bound_max(kind, A, prec) for A in range(3, A_max + 1, 2)]


def first_crossing(table: Sequence[BoundResult]) -> int | None:
    for b in table:
        if b.value > 1:
            return b.A
    return None
