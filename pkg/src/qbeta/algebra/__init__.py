"""Exact substrate: rationals, Laurent polynomials, rational functions."""

from fractions import Fraction as Rational

from .combinatorics import StirlingKind, c_stirling, poch_poly, q_binomial, stirling
from .cyclotomic import (
    cyclotomic,
    cyclotomic_value,
    delta_poly,
    divisors,
    dn_poly,
    mobius,
    mobius_sieve,
    ord_cyclotomic,
    totient,
    varphi_multiplicities,
    varphi_poly,
)
from .laurent import ONE, X, LaurentPoly, to_fraction
from .ratfunc import RatFunc


def rational_to_str(x) -> str:
    x = to_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(s: str) -> Rational:
    return Rational(s)


__all__ = [
    "LaurentPoly",
    "ONE",
    "RatFunc",
    "Rational",
    "StirlingKind",
    "X",
    "c_stirling",
    "cyclotomic",
    "cyclotomic_value",
    "delta_poly",
    "divisors",
    "dn_poly",
    "mobius",
    "mobius_sieve",
    "ord_cyclotomic",
    "poch_poly",
    "q_binomial",
    "rational_from_str",
    "rational_to_str",
    "stirling",
    "to_fraction",
    "totient",
    "varphi_multiplicities",
    "varphi_poly",
]
