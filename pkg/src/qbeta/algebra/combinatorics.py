"""q-Pochhammer products, q-binomials and Stirling numbers."""

from __future__ import annotations

import enum
from functools import lru_cache

from flint import fmpq_poly

from .laurent import LaurentPoly


class StirlingKind(enum.Enum):
    FirstSignless = "first"
    Second = "second"


def poch_poly(m: int, k: int) -> LaurentPoly:
    """(q^m; q)_k = prod_{i<k} (1 - q^{m+i}) as a Laurent polynomial."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = LaurentPoly.constant(1)
    for i in range(k):
        e = m + i
        out = out * (LaurentPoly.constant(1) - LaurentPoly.monomial(e))
    return out


def q_binomial(n: int, k: int) -> LaurentPoly:
    if n < 0 or k < 0:
        raise ValueError("q_binomial needs nonnegative arguments")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    num = poch_poly(1, n)
    den = poch_poly(1, k) * poch_poly(1, n - k)
    return num.exact_div(den)


@lru_cache(maxsize=None)
def _stirling_first(s: int, j: int) -> int:
    if s == j:
        return 1
    if j == 0 or j > s:
        return 0
    return _stirling_first(s - 1, j - 1) + (s - 1) * _stirling_first(s - 1, j)


@lru_cache(maxsize=None)
def _stirling_second(s: int, j: int) -> int:
    if s == j:
        return 1
    if j == 0 or j > s:
        return 0
    return _stirling_second(s - 1, j - 1) + j * _stirling_second(s - 1, j)


def stirling(kind: StirlingKind, s: int, j: int) -> int:
    """Signless first kind c(s, j) or second kind S(s, j), for 1 <= j <= s.

    ``s = j = 0`` is accepted and returns 1 (the empty product).
    """
    if not (0 <= j <= s):
        raise ValueError(f"need 0 <= j <= s, got s={s}, j={j}")
    if j == 0 and s > 0:
        raise ValueError("j must be positive for s > 0")
    if kind is StirlingKind.FirstSignless:
        return _stirling_first(s, j)
    if kind is StirlingKind.Second:
        return _stirling_second(s, j)
    raise TypeError(f"unknown kind {kind!r}")


def c_stirling(s: int, j: int) -> int:
    """c(s, j), returning 0 outside 1 <= j <= s instead of raising."""
    if s == 0 and j == 0:
        return 1
    if j < 1 or j > s:
        return 0
    return _stirling_first(s, j)


def rising_factorial_poly(s: int) -> fmpq_poly:
    """x(x+1)...(x+s-1) as an ordinary polynomial."""
    p = fmpq_poly([1])
    for i in range(s):
        p = p * fmpq_poly([i, 1])
    return p
