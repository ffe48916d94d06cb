from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from modecert.cases import HEUN_CASES, ModeCase
from modecert.certify import operator_series
from modecert.errors import NoBoundsRow, UnsupportedCase
from modecert.exactmath import MultiPoly, QComplex, RationalExpr, rat, var
from modecert.recurrence import (coeff_AB, error_coeffs, error_model, error_terms,
                                 quasisolution, quasisolution_overrides, ratio_sequence,
                                 series_coefficients, symbolic_ratio)
from modecert.standardform import to_heun
from modecert.tables import FINITE_CASES

FINITE = [ModeCase(k) for k in FINITE_CASES]
lambdas = st.builds(QComplex, st.fractions(min_value=0, max_value=4, max_denominator=3),
                    st.fractions(min_value=-6, max_value=6, max_denominator=3))


def test_A_10_printed_form():
    assert coeff_AB("10").A == rat("(x^2+12*x+12*n^2+8*(x+4)*n+12)/(4*(2*n^2+9*n+7))")


def test_B_11_printed_form():
    assert coeff_AB("11").B == rat("-(x+2*n-1)*(x+2*n+1)/(4*(n+1)*(2*n+7))")


def test_first_step_10_at_zero():
    co = coeff_AB("10")
    assert co.A.evaluate({"n": 1, "x": 0}) == Fraction(7, 9)
    assert co.B.evaluate({"n": 1, "x": 0}) == Fraction(-1, 9)


def test_hypergeometric_case_has_no_heun_recurrence():
    with pytest.raises(UnsupportedCase):
        coeff_AB("01")


def test_seed_and_first_ratios_10():
    xs = series_coefficients("10", 0, 3)
    assert xs[0] == QComplex(1) and xs[1] == QComplex(Fraction(3, 7))
    rs = ratio_sequence("10", 0, 2)
    assert rs[:2] == [QComplex(Fraction(3, 7)), QComplex(Fraction(14, 27))]


@pytest.mark.parametrize("case", HEUN_CASES, ids=lambda c: c.key)
def test_poincare_data(case):
    co = coeff_AB(case)
    a_inf, b_inf = co.limits()
    assert a_inf == rat("3/2") and b_inf == rat("-1/2")
    assert co.characteristic_polynomial() == (var("T") - 1) * (var("T") - Fraction(1, 2))


@settings(max_examples=12)
@given(st.sampled_from(FINITE), lambdas)
def test_ratio_is_series_quotient(case, lam):
    xs = series_coefficients(case, lam, 51)
    rs = ratio_sequence(case, lam, 50)
    assert all(x != QComplex(0) for x in xs)
    assert all(xs[n + 1] == rs[n] * xs[n] for n in range(51))


@pytest.mark.parametrize("case", FINITE, ids=lambda c: c.key)
def test_series_matches_generic_frobenius_solution(case):
    lam = QComplex(1, 2)
    op = to_heun(case).operator()
    assert operator_series(op, 12, lam) == series_coefficients(case, lam, 12)


def test_family_series_needs_l():
    with pytest.raises(ValueError):
        series_coefficients("l2", 0, 3)
    xs = series_coefficients("l2", 0, 4, l_value=5)
    assert xs[2] == xs[1] * ratio_sequence("l2", 0, 1, l_value=5)[1]


def test_symbolic_ratio_agrees_with_samples():
    r2 = symbolic_ratio("11", 2)
    lam = QComplex(Fraction(1, 2), 3)
    assert QComplex.of(r2.evaluate({"x": lam})) == ratio_sequence("11", lam, 2)[2]


def test_quasisolution_rows():
    assert quasisolution("10").rtilde == \
        rat("x^2/(8*n^2+36*n+28) + x*(2*n+3)/(2*n^2+9*n+7) + (2*n+4)/(2*n+7)")
    q23 = quasisolution("23").rtilde
    assert q23.partial_eval({"x": 0}) - rat("(4*n+42)/(4*n+47)") == \
        RationalExpr(MultiPoly())


@pytest.mark.parametrize("case", HEUN_CASES, ids=lambda c: c.key)
def test_quasisolution_tends_to_one(case):
    qs = quasisolution(case)
    diff = (qs.rtilde - 1).cancel()
    assert diff.num.degree("n") < diff.den.degree("n")
    assert qs.limit() == rat(1)


def test_quasisolution_at_zero_positive_prefix():
    e = quasisolution("10").rtilde.partial_eval({"x": 0})
    assert e.evaluate({"n": 1}) == Fraction(2, 3)
    assert all(e.evaluate({"n": n}) > 0 for n in range(1, 101))


def test_bounds_row_11():
    m = error_coeffs("11")
    assert m.abar == rat("(72+125*n)/(300*(-3+5*n))")
    assert m.bbar == rat("(-11+16*n)/(4*(-1+8*n))")
    assert (m.n0, m.u) == (2, Fraction(3, 10))


def test_bounds_row_12():
    m = error_coeffs("12")
    assert (m.n0, m.u) == (4, Fraction(1, 3))


def test_10_has_no_printed_bounds():
    with pytest.raises(NoBoundsRow):
        error_coeffs("10")
    assert not error_model("10").has_bounds


def test_error_b_at_unit_quasisolution():
    co = coeff_AB("22")
    _, b = error_terms(rat(1), co)
    assert b == (-co.B).cancel()


def test_error_recurrence_identity():
    # e_n = a_n + b_n e_{n-1}/(1 + e_{n-1}) reproduces the ratio sequence exactly
    case, lam = ModeCase("21"), QComplex(0, 3)
    m = error_model(case)
    rt = quasisolution(case).rtilde
    rs = ratio_sequence(case, lam, 12)

    def at(e, n):
        return QComplex.of(e.evaluate({"n": n, "x": lam}))

    e_prev = rs[1] / at(rt, 1) - 1
    for n in range(2, 13):
        e_n = at(m.a_n, n) + at(m.b_n, n) * e_prev / (1 + e_prev)
        assert e_n == rs[n] / at(rt, n) - 1
        e_prev = e_n


def test_overrides_are_scoped():
    original = quasisolution("11").rtilde
    with quasisolution_overrides({"11": "(n+1)/(n+2)"}):
        assert quasisolution("11").rtilde == rat("(n+1)/(n+2)")
    assert quasisolution("11").rtilde == original
