from fractions import Fraction as F

import pytest

from conftest import ACCEPTANCE_GRID
from qbeta.algebra import LaurentPoly, RatFunc, delta_poly, dn_poly, ord_cyclotomic
from qbeta.denominators import (
    DenomSpec,
    build_Dn,
    build_Dn_tilde,
    check_csj_denominator,
    check_integrality,
    check_dn_integrality,
    conjecture_cell,
    conjecture_scan,
    membership,
    wn_lemma_check,
)
from qbeta.linear_forms import FormParams, LinearFormBundle

ONE = LaurentPoly.constant(1)


def lp(*coeffs, shift=0):
    return LaurentPoly.from_coeff_list(coeffs, shift)


# -- DenomSpec, D_n -----------------------------------------------------------------


def test_default_spec_values():
    spec = DenomSpec.default(FormParams(1, 3, 1))
    assert spec.alpha == F(-3, 4) - 1
    assert spec.beta == 2 - 2 - 3 + 1
    assert spec.gamma == F(-1, 2) - F(1, 6) + 1
    assert spec.factorial_part == 2
    assert spec.q_exponent == -4  # floor(-7/4 - 2 + 1/3)


def test_q_exponent_is_floor():
    for n, A, r in [(3, 5, 2), (5, 7, 1), (9, 3, 1)]:
        spec = DenomSpec.default(FormParams(n, A, r))
        v = spec.alpha * n * n + spec.beta * n + spec.gamma
        assert spec.q_exponent <= v < spec.q_exponent + 1


def test_dn_structure():
    for n, A, r in [(1, 3, 1), (3, 5, 2), (5, 3, 1)]:
        p = FormParams(n, A, r)
        spec = DenomSpec.default(p)
        D = build_Dn(p)
        assert D.max_exponent == spec.q_exponent
        assert D.coefficient(spec.q_exponent) % spec.factorial_part == 0
        body = D.shifted(-spec.q_exponent).reciprocal_variable()
        # varphi contributes 2rn factors of Phi_2; d_{2n} contributes A-1 more
        assert ord_cyclotomic(body, 2) == 2 * r * n + (A - 1)


def test_dn_over_dn_tilde_is_delta():
    for n, A, r in [(1, 3, 1), (3, 5, 1), (3, 3, 1)]:
        p = FormParams(n, A, r)
        ratio = RatFunc(build_Dn(p)) / RatFunc(build_Dn_tilde(p))
        assert ratio == RatFunc(delta_poly(n).reciprocal_variable())
    p = FormParams(3, 5, 1)

    def span(f):
        return f.max_exponent - f.min_exponent

    assert span(build_Dn(p)) - span(build_Dn_tilde(p)) == delta_poly(3).degree == 7


def test_dn_tilde_shares_prefactors():
    p = FormParams(3, 5, 2)
    spec = DenomSpec.default(p)
    Dt = build_Dn_tilde(p)
    assert Dt.max_exponent == spec.q_exponent
    assert abs(Dt.coefficient(spec.q_exponent)) == abs(build_Dn(p).coefficient(spec.q_exponent)) == 24


def test_lcm_claim():
    for n in range(1, 10):
        for A in (3, 5, 7):
            big = dn_poly(2 * n) ** (A - 1) * delta_poly(n)
            for s in range(1, A + 1):
                assert (delta_poly(n) ** s * dn_poly(n).subs_power(2) ** (A - s)).divides(big)


# -- membership -------------------------------------------------------------------------


def test_membership_three_conditions():
    m = membership(RatFunc(lp(1, 2, shift=-3)))
    assert m.member and m.max_exponent == -2 and m.witness == lp(1, 2, shift=-3)
    m = membership(RatFunc(lp(1, F(1, 2), shift=-3)))
    assert not m.member and not m.integer_coefficients and m.first_bad_coeff == (-2, "1/2")
    m = membership(RatFunc(lp(1, 1, shift=0)))
    assert not m.member and m.integer_coefficients and m.max_exponent == 1
    assert membership(RatFunc(lp(1, 1)), allow_positive=True).member
    m = membership(RatFunc(ONE, lp(1, 1)))
    assert not m.member and not m.unit_denominator
    assert m.to_json()["unit_denominator"] is False


# -- theorem checks on the acceptance grid ------------------------------------------------


@pytest.mark.parametrize("cell", ACCEPTANCE_GRID)
def test_dn_integrality_on_grid(cell, bundles):
    report = check_dn_integrality(bundles(*cell)[2])
    assert report.passed and not report.discrepancy
    assert sorted(report.per_j) == [0] + list(range(2, cell[1], 2))
    assert all(m.witness is not None for m in report.per_j.values())


@pytest.mark.parametrize("cell", ACCEPTANCE_GRID)
def test_csj_denominator_on_grid(cell, bundles):
    rep = check_csj_denominator(bundles(*cell)[0])
    n, A, _ = cell
    assert len(rep) == A * (n + 1)
    assert all(m.member for m in rep.values())


def test_dropping_the_delta_and_q_power_is_localized(bundles):
    # the bare q-power cannot be dropped: a positive exponent must be reported
    b = bundles(3, 5, 1)[2]
    p = b.params
    res = check_integrality(b, build_Dn(p).shifted(-DenomSpec.default(p).q_exponent + 40))
    bad = [m for m in res.values() if not m.member]
    assert bad and all(m.max_exponent > 0 for m in bad)


def test_dropping_factorial_reports_bad_coefficient(bundles):
    b = bundles(3, 5, 1)[2]
    p = b.params
    D = build_Dn(p)
    res = check_integrality(b, D.scale(F(1, 24 * 7)))
    bad = [m for m in res.values() if not m.integer_coefficients]
    assert bad and all(m.first_bad_coeff is not None for m in bad)


def test_gamma_retry_is_not_a_pass():
    # a fake coefficient that needs one extra power of 1/q
    p = FormParams(1, 3, 1)
    spec = DenomSpec.default(p)
    D = build_Dn(p)
    lead = D.max_exponent
    fake = RatFunc(ONE) / RatFunc(D) * RatFunc(LaurentPoly.monomial(1))
    report = check_dn_integrality(LinearFormBundle(p, fake, {2: RatFunc(0)}), spec)
    assert not report.passed
    assert report.gamma_used == spec.gamma - 1
    assert lead == spec.q_exponent


# -- w_n integrality ----------------------------------------------------------------------------


def test_wn_examples():
    ok, w = wn_lemma_check(1, 1)
    assert ok and w == lp(1, 1, 1)
    ok, w = wn_lemma_check(3, 2)
    assert ok and w.degree == 10 and w.has_integer_coefficients()
    assert wn_lemma_check(5, 5)[0]
    with pytest.raises(ValueError):
        wn_lemma_check(2, 3)


def test_wn_degree_formula():
    # deg = deg varphi_n + n e
    from qbeta.algebra import varphi_poly

    for e in (1, 3, 5):
        for n in (1, 2, 4):
            ok, w = wn_lemma_check(e, n)
            assert ok and w.degree == varphi_poly(n).degree + n * e


def test_wn_lemma_range():
    for e in range(1, 16, 2):
        for n in range(1, 13):
            assert wn_lemma_check(e, n)[0], (e, n)


# -- conjecture ---------------------------------------------------------------------------------


def test_conjecture_scan_records(bundles):
    cells = conjecture_scan([bundles(*c)[2] for c in ACCEPTANCE_GRID])
    for cell in cells:
        js = cell.to_json()
        assert js["denominator"] == "Dn_tilde"
        assert set(js["minimal_shift"]) == set(js["per_j"])
    # recorded evidence (not a theorem): the small cells come out integral
    by_key = {c.params.key(): c for c in cells}
    assert by_key["n1_A3_r1"].integral
    assert by_key["n3_A3_r1"].integral


def test_conjecture_minimal_shift_semantics():
    p = FormParams(1, 3, 1)
    Dt = build_Dn_tilde(p)
    fake = RatFunc(LaurentPoly.monomial(3)) / RatFunc(Dt)
    cell = conjecture_cell(LinearFormBundle(p, fake, {2: RatFunc(0)}))
    assert not cell.integral
    assert cell.minimal_shift[0] == 3 and cell.minimal_shift[2] == 0
