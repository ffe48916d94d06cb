from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from modecert.errors import DivisionByZeroPoly
from modecert.exactmath import (MultiPoly, QComplex, RationalExpr, count_real_roots,
                                imaginary_axis_abs2, nonpositive_on_halfline, parse_expr,
                                parse_poly, poly_divmod, poly_shift, sign_certificate,
                                sturm_sign_on_interval, var)

X, N, T = var("x"), var("n"), var("T")

small = st.integers(-6, 6)
fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def univariate(coeffs, v=X):
    return sum((Fraction(c) * v ** k for k, c in enumerate(coeffs)), MultiPoly())


polys = st.lists(small, min_size=1, max_size=6).map(univariate)


# -- shifts and division ----------------------------------------------------

def test_shift_binomial():
    assert poly_shift(X * X, "x", 1) == X * X + 2 * X + 1


def test_shift_by_zero_is_identity():
    p = parse_poly("3*n^2*l - x + 7")
    assert poly_shift(p, "n", 0) == p


def test_shift_hand_expansion():
    assert poly_shift(N * N - 4, "n", 2) == N * N + 4 * N


def test_divmod_small():
    q, r = poly_divmod(X * X + 1, X, "x")
    assert q.as_poly() == X and r == MultiPoly.const(1)


def test_divmod_cubic():
    q, r = poly_divmod(X ** 3, X + 1, "x")
    assert q.as_poly() == X * X - X + 1 and r == MultiPoly.const(-1)


def test_divmod_by_zero():
    with pytest.raises(DivisionByZeroPoly):
        poly_divmod(X, MultiPoly(), "x")


@given(polys, fractions)
def test_shift_round_trip(p, s):
    assert poly_shift(poly_shift(p, "x", s), "x", -s) == p


@given(polys, st.lists(small, min_size=2, max_size=4).filter(lambda c: c[-1] != 0))
def test_divmod_reconstruction(p, dcoeffs):
    d = univariate(dcoeffs)
    q, r = poly_divmod(p, d, "x")
    assert q.as_poly() * d + r == p
    assert r.is_zero() or r.degree("x") < d.degree("x")


# -- sign certificates ------------------------------------------------------

def test_halfline_negative_line():
    assert nonpositive_on_halfline(-T - 1, "T", 0).passed


def test_halfline_positive_slope_fails():
    assert not nonpositive_on_halfline(T - 1, "T", 0).passed


def test_halfline_certifies_negated_quadratic_from_five():
    p = T * T - 6 * T + 5
    cert = nonpositive_on_halfline(-p, "T", 5)
    assert cert.passed
    assert sign_certificate(-p, {"T": 5}).witness["shifted"] == -(T * T + 4 * T)


@given(st.lists(st.integers(-9, 0), min_size=1, max_size=5), st.integers(0, 4),
       st.lists(st.fractions(min_value=0, max_value=50), min_size=1, max_size=30))
def test_halfline_pass_implies_samples_nonpositive(coeffs, start, offsets):
    p = univariate(coeffs, T)
    if nonpositive_on_halfline(p, "T", start).passed:
        for o in offsets:
            assert p.evaluate({"T": start + o}) <= 0


def test_sturm_negative_line():
    assert sturm_sign_on_interval(-T - 1, "T", 0, 25).passed


def test_sturm_detects_root():
    assert not sturm_sign_on_interval(T - 1, "T", 0, 2).passed


def test_sturm_sign_is_for_p_not_minus_p():
    p = T * T - 100
    assert sturm_sign_on_interval(p, "T", 0, 5).passed
    assert not sturm_sign_on_interval(-p, "T", 0, 5).passed


@given(st.sets(st.integers(-8, 8), max_size=5), st.integers(-9, 8), st.integers(1, 10),
       st.booleans())
def test_sturm_count_matches_constructed_roots(roots, lo, width, with_quadratic):
    p = MultiPoly.const(1)
    for r in roots:
        p = p * (T - r)
    if with_quadratic:
        p = p * (T * T + 1)
    hi = lo + width
    assert count_real_roots(p, "T", lo, hi) == sum(1 for r in roots if lo < r <= hi)


# -- complex evaluation -----------------------------------------------------

@given(st.lists(small, min_size=1, max_size=6), st.fractions(min_value=-4, max_value=4,
                                                              max_denominator=5))
def test_imaginary_axis_abs2(coeffs, t):
    p = univariate(coeffs)
    value = QComplex.of(p.evaluate({"x": QComplex(0, t)}))
    expected = value.re ** 2 + value.im ** 2
    assert imaginary_axis_abs2(p).evaluate({"T": t * t}) == expected


def test_qcomplex_field_ops():
    a, b = QComplex(1, 2), QComplex(Fraction(1, 2), -3)
    assert (a * b) / b == a
    assert a - a == QComplex(0)


# -- rational expressions and parsing ---------------------------------------

def test_cancel_removes_common_factor():
    e = RationalExpr(N * N - 1, N - 1).cancel()
    assert e.is_polynomial() and e.as_poly() == N + 1


def test_limit_at_infinity():
    e = parse_expr("(3*n^2 + x)/(2*n^2 + 1)")
    assert e.limit_at_infinity("n") == RationalExpr(MultiPoly.const(Fraction(3, 2)))


@given(st.lists(small, min_size=1, max_size=4), st.lists(small, min_size=1, max_size=4))
def test_text_round_trip(a, b):
    e = RationalExpr(univariate(a, N) * X + 1, univariate(b, N) * N + 2)
    text = str(e)
    assert parse_expr(text) == e
    assert str(parse_expr(text)) == text


def test_parse_rejects_unknown_syntax():
    with pytest.raises(ValueError):
        parse_expr("f(n)")
