from fractions import Fraction as F

import mpmath
import pytest
import sympy as sp

import oracles
from qbeta.catalan import (
    An_Bn,
    HalfInt,
    _catalan_series_term,
    alpha_n,
    binom_rational,
    catalan_form,
    exact_value_at_one,
    extrapolated_limit,
    harmonic,
    qlinear_residual,
    weighted_Bn,
)


def test_halfint():
    assert HalfInt.of(F(5, 2)).twice_value == 5
    assert HalfInt.of(3).is_integer
    with pytest.raises(ValueError):
        HalfInt.of(F(1, 3))


def test_harmonic_examples():
    assert harmonic(3) == F(11, 6)
    assert harmonic(F(1, 2)) == 2
    assert harmonic(F(5, 2)) == F(46, 15)
    assert harmonic(0) == 0
    assert harmonic(F(-1, 2)) == 0  # empty sum
    with pytest.raises(ValueError):
        harmonic(-1)
    with pytest.raises(ValueError):
        harmonic(F(-3, 2))


def test_harmonic_integer_branch_large():
    acc = F(0)
    for m in range(1, 10**4 + 1):
        acc += F(1, m)
        if m in (1, 10, 100, 10**4):
            assert harmonic(m) == acc


def test_binom_rational_matches_sympy():
    for a in (F(7, 2), F(-1, 2), F(11, 2), F(3)):
        for k in range(6):
            assert binom_rational(a, k) == oracles.to_fraction(sp.binomial(sp.Rational(a.numerator, a.denominator), k))


def test_alpha_examples_and_sympy():
    assert alpha_n(1) == F(7, 2)
    assert alpha_n(3) == F(19471, 128)
    for n in (1, 3, 5):
        assert alpha_n(n) == oracles.to_fraction(oracles.alpha_n_sympy(n))
    with pytest.raises(ValueError):
        alpha_n(4)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_alpha_is_limit_of_An(n):
    A_n, _ = An_Bn(n)
    assert exact_value_at_one(A_n) == alpha_n(n)
    with mpmath.workprec(256):
        lim = extrapolated_limit(A_n)
        a = alpha_n(n)
        ref = mpmath.mpf(a.numerator) / a.denominator
        assert abs(lim / ref - 1) < 1e-3


@pytest.mark.parametrize("n", [1, 3, 5])
@pytest.mark.parametrize("x", [F(1, 2), F(1, 3)])
def test_qlinear_residual(n, x):
    res = qlinear_residual(n, x, 256)
    assert res.value < mpmath.ldexp(1, -128)


def test_An_Bn_rejects_even():
    with pytest.raises(ValueError):
        An_Bn(2)


def test_catalan_series_terms_vanish_for_small_k():
    for n in (1, 3, 5):
        for k in range(1, n + 1):
            assert _catalan_series_term(k, n) == 0
        assert _catalan_series_term(n + 1, n) != 0


def test_catalan_form_n1():
    f = catalan_form(1, 256)
    with mpmath.workprec(288):
        G = mpmath.catalan
        assert f.alpha == F(7, 2)
        assert abs(f.lhs - (mpmath.mpf(7) / 2 * G + f.beta_extracted)) < mpmath.ldexp(1, -200)
        assert abs(catalan_form(1, 128).beta_extracted - f.beta_extracted) < mpmath.ldexp(1, -100)
        _, B1 = An_Bn(1)
        beta_exact = exact_value_at_one(weighted_Bn(B1))
        assert beta_exact == F(-13, 4)
        assert abs(f.beta_extracted - mpmath.mpf(-13) / 4) < 1e-3
        assert abs(extrapolated_limit(weighted_Bn(B1)) - f.beta_extracted) < 1e-3


def test_catalan_form_shrinks():
    vals = [abs(catalan_form(n, 192).lhs) for n in (3, 5, 7, 9)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_beta_extracted_is_rational_limit_for_n3():
    f = catalan_form(3, 256)
    _, B3 = An_Bn(3)
    exact = exact_value_at_one(weighted_Bn(B3))
    with mpmath.workprec(256):
        assert abs(f.beta_extracted - mpmath.mpf(exact.numerator) / exact.denominator) < mpmath.ldexp(1, -100)
