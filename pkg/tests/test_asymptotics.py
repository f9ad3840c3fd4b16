import csv
import io
import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from qbeta.algebra import delta_poly, dn_poly, varphi_poly
from qbeta.asymptotics import (
    CyclotomicLogs,
    RateSeries,
    assemble_alphas,
    asymptotic_constant,
    bound,
    bound_max,
    bounds_table,
    denominator_constant,
    first_crossing,
    log_Dn,
    mobius_partial_sums,
    nesterenko_bound,
    rate_denominator_pieces,
    rate_Dn,
    rate_phat,
    rate_Sn,
)
from qbeta.denominators import build_Dn
from qbeta.linear_forms import FormParams

LOG2 = math.log(2)


# -- RateSeries ------------------------------------------------------------------------


def test_rate_series_validation_and_csv():
    with pytest.raises(ValueError):
        RateSeries("x", [3, 2], [mpmath.mpf(1), mpmath.mpf(1)], mpmath.mpf(1))
    s = RateSeries("x", [1, 2, 4, 8], [mpmath.mpf(v) for v in (2, 1.5, 1.2, 1.05)], mpmath.mpf(1))
    assert s.trend_ok() and s.within(0.06) and not s.within(0.04)
    rows = list(csv.reader(io.StringIO(s.to_csv())))
    assert rows[0] == ["n", "value", "limit", "deviation"]
    assert len(rows) == 5 and rows[1][0] == "1"
    assert s.to_json()["rows"][0]["n"] == 1
    up = RateSeries("u", [1, 30], [mpmath.mpf(3), mpmath.mpf(1)], mpmath.mpf(1), kind="upper")
    assert up.respects_upper(0.05, n_min=25) and not up.respects_upper(0.05)


# -- exact cyclotomic logs against expanded polynomials ------------------------------------------


def test_cyclotomic_logs_match_exact_polynomials():
    logs = CyclotomicLogs(2, 40)
    with mpmath.workprec(160):
        for n in (1, 5, 12, 20):
            assert abs(logs.dn(n) - mpmath.log(abs(dn_poly(n)(2)))) < 1e-25
            assert abs(logs.delta(n) - mpmath.log(abs(delta_poly(n)(2)))) < 1e-25
            assert abs(logs.varphi(n) - mpmath.log(abs(varphi_poly(n)(2)))) < 1e-25


def test_log_dn_matches_exact_evaluation():
    for n, A, r in [(1, 3, 1), (3, 5, 2), (7, 3, 1)]:
        p = FormParams(n, A, r)
        with mpmath.workprec(160):
            exact = mpmath.log(abs(build_Dn(p)(F(1, 2))))
            assert abs(log_Dn(p, F(1, 2)) - exact) < 1e-25


# -- rates (moderate grids) -------------------------------------------------------------------


def test_rate_sn_limits_and_trend():
    s = rate_Sn(F(1, 2), 3, 1, [4, 8, 16, 24], prec=128)
    assert abs(float(s.limit) + 0.5 * LOG2) < 1e-15
    assert s.trend_ok()
    s2 = rate_Sn(F(1, 2), 5, 2, [4, 16], prec=128)
    assert abs(float(s2.limit) + LOG2) < 1e-15
    assert s2.trend_ok()


def test_rate_sn_accepts_even_n_and_rejects_bad_q():
    assert len(rate_Sn(F(1, 2), 3, 1, [2, 3], prec=96).values) == 2
    with pytest.raises(ValueError):
        rate_Sn(F(3, 2), 3, 1, [3])


def test_denominator_pieces_moderate_n():
    pieces = rate_denominator_pieces(F(1, 2), [25, 100, 200])
    assert abs(float(pieces["dn"].limit) - 3 / math.pi**2 * LOG2) < 1e-15
    assert abs(float(pieces["Delta"].limit) - 8 / math.pi**2 * LOG2) < 1e-15
    assert abs(float(pieces["varphi"].limit) - 2 / 3 * LOG2) < 1e-15
    for s in pieces.values():
        assert s.trend_ok()
        assert s.within(0.05)


def test_rate_dn_additivity():
    A, r = 5, 2
    pieces = rate_denominator_pieces(F(1, 3), [1])
    L = -mpmath.log(mpmath.mpf(1) / 3)
    total = (
        (mpmath.mpf(A) / 4 + r * r) * L
        + 2 * r * pieces["varphi"].limit
        + (A - 1) * 4 * pieces["dn"].limit  # d_{2n}: (2n)^2 = 4 n^2
        + pieces["Delta"].limit
    )
    assert abs(total - denominator_constant(A, r) * L) < 1e-30
    s = rate_Dn(A, r, F(1, 3), [51, 201])
    assert s.trend_ok() and s.within(0.03)


def test_rate_phat_small_n_upper():
    s = rate_phat(3, 1, F(1, 2), [1, 3, 5, 9], prec=192)
    assert all(mpmath.isfinite(v) and v > 0 for v in s.values)
    assert abs(float(s.limit) - 7 / 8 * LOG2) < 1e-15
    assert s.kind == "upper"
    s5 = rate_phat(5, 1, F(1, 2), [3], prec=192)
    assert abs(float(s5.limit) - 9 / 8 * LOG2) < 1e-15


# -- Möbius sums -------------------------------------------------------------------------------


def test_mobius_examples():
    odd, even = mobius_partial_sums(10)
    assert abs(float(odd) - (1 - 1 / 9 - 1 / 25 - 1 / 49)) < 1e-14
    assert abs(float(even) - (-1 / 4 + 1 / 36 + 1 / 100)) < 1e-14
    with pytest.raises(ValueError):
        mobius_partial_sums(0)


@given(st.integers(1, 400))
@settings(max_examples=40, deadline=None)
def test_mobius_against_exact_and_bounded(n):
    odd, even = mobius_partial_sums(n)
    ro, re = oracles.mobius_sums_direct(n)
    assert abs(float(odd) - float(ro)) < 1e-13
    assert abs(float(even) - float(re)) < 1e-13
    assert abs(float(odd)) <= 1 and abs(float(even)) <= 1


def test_mobius_limits():
    odd, even = mobius_partial_sums(10**5)
    assert abs(float(odd) - 8 / math.pi**2) < 1e-3
    assert abs(float(even) + 2 / math.pi**2) < 1e-3


# -- bounds --------------------------------------------------------------------------------------


def test_quoted_bound_values():
    assert float(bound("f", 3, 21)) >= 1.02
    assert abs(float(bound("f", 3, 21)) - 1.0281) < 1e-4
    assert abs(float(bound("g", 3, 21)) - 1.0428) < 1e-4
    assert abs(float(bound_max("f", 21)) - 1.028) < 1e-3
    assert bound_max("f", 21).r == 3
    assert abs(float(bound_max("g", 21)) - 1.042) < 1e-3
    assert abs(float(bound_max("f", 19)) - 0.973) < 1e-3
    assert abs(float(bound_max("g", 19)) - 0.988) < 1e-3


def test_bound_domain_errors():
    for args in [("f", 0, 5), ("f", 3, 5), ("f", 1, 4), ("h", 1, 5)]:
        with pytest.raises(ValueError):
            bound(*args)


def test_bound_max_is_exhaustive():
    for A in (3, 21, 51, 99):
        best = max(float(bound("f", r, A)) for r in range(1, (A - 1) // 2 + 1))
        assert abs(float(bound_max("f", A)) - best) < 1e-15


def test_first_crossing():
    assert first_crossing(bounds_table("f", 31)) == 21
    assert first_crossing(bounds_table("g", 31)) == 21
    assert first_crossing(bounds_table("f", 11)) is None


def test_asymptotic_growth():
    A = 10**5 + 1
    ratio = bound_max("f", A).value / mpmath.sqrt(A)
    assert abs(ratio / asymptotic_constant() - 1) < 0.02
    assert abs(float(asymptotic_constant()) - 0.26990) < 1e-5


@given(st.integers(1, 49).map(lambda k: 2 * k + 1), st.data())
@settings(max_examples=60, deadline=None)
def test_nesterenko_reproduces_f_and_g_exceeds_f(A, data):
    r = data.draw(st.integers(1, (A - 1) // 2))
    q = data.draw(st.sampled_from([F(1, 2), F(1, 3), F(-2, 7)]))
    with mpmath.workprec(256):
        a1, a2 = assemble_alphas(A, r, q)
        assert abs(nesterenko_bound(a1, a2) - bound("f", r, A).value) < mpmath.ldexp(1, -200)
    assert bound("g", r, A).value > bound("f", r, A).value


def test_alpha_signs():
    a1, _ = assemble_alphas(21, 3)
    assert abs(float(a1) / LOG2 - 1.622) < 1e-3
    a1, _ = assemble_alphas(3, 1)
    assert a1 <= 0
    assert bound("f", 1, 3).value <= 1
    with pytest.raises(ValueError):
        nesterenko_bound(1, 0)
