import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from modecert.cases import HEUN_CASES, ModeCase
from modecert.certificate import Kind, Verdict
from modecert.certify import (HYPERGEOM_SAMPLES, bound_polynomial, certify_bound,
                              certify_closure, certify_hypergeometric_case, certify_poincare,
                              certify_quasisolution_roots, certify_wall, derive_bounds,
                              error_target, integral_parts, negative_on_halfline,
                              nonpositive_with_fallback,
                              operator_series, positive_rational, refold_wall, reverify,
                              root_form, scaled_tail_certificate, verify_case, wall_coefficients,
                              wall_refolds)
from modecert.errors import DegenerateDivision
from modecert.exactmath import MultiPoly, QComplex, parse_poly, rat, var
from modecert.recurrence import error_coeffs, error_model
from modecert.standardform import hypergeometric_operator
from modecert.tables import FINITE_CASES

X, T, N = var("x"), var("T"), var("n")

# |e_{n0}| polynomial for (1,2) in T = t^2, reference value
ESTERROR_12 = (
    "-32225063143731938775 + 1229703226782849704*T - 1504371751505412669*T^2"
    " - 384997689421455888*T^3 - 27845993942231878*T^4 - 896965123990016*T^5"
    " - 13901512438618*T^6 - 99535465456*T^7 - 299917523*T^8 - 340648*T^9 - 121*T^10")


# -- Wall's criterion --------------------------------------------------------

def test_wall_11_coefficients():
    xs = certify_wall("11").witness["coefficients"]
    assert xs == [rat(v) for v in ("1/32", "64/495", "49005/110944", "55472/24255")]


def test_wall_21_first_and_last():
    xs = certify_wall("21").witness["coefficients"]
    assert xs[0] == rat("1/40") and xs[3] == rat("16768/18711")


def test_wall_family_first_coefficient():
    cert = certify_wall("l1")
    assert cert.passed
    assert cert.witness["coefficients"][0] == rat("1/(7*l+18)")


def test_wall_degenerate_division():
    with pytest.raises(DegenerateDivision):
        wall_coefficients(X * X + 1)


@pytest.mark.parametrize("key", FINITE_CASES)
def test_wall_roots_in_left_half_plane(key):
    cert = certify_wall(key)
    assert cert.passed and reverify(cert)
    d = cert.witness["denominator"]
    cs = d.coeffs("x")
    roots = mpmath.polyroots([float(cs.get(k, MultiPoly()).constant_term())
                              for k in range(max(cs), -1, -1)], maxsteps=200, extraprec=200)
    assert all(mpmath.re(r) < 0 for r in roots)


def _poly_from_roots(reals, quads):
    p = MultiPoly.const(1)
    for a in reals:
        p = p * (X + a)
    for b, c in quads:
        p = p * (X * X + b * X + c)
    return p


pos = st.fractions(min_value=Fraction(1, 4), max_value=6, max_denominator=4)


@settings(max_examples=40)
@given(st.lists(pos, max_size=3), st.lists(st.tuples(pos, pos), max_size=2))
def test_wall_positive_for_stable_polynomials(reals, quads):
    p = _poly_from_roots(reals, quads)
    if p.degree("x") < 1:
        return
    xs = wall_coefficients(p)
    assert all(x.as_poly().constant_term() > 0 for x in xs)
    assert wall_refolds(p, xs)


@settings(max_examples=40)
@given(st.lists(pos, max_size=2), st.lists(st.tuples(pos, pos), max_size=2), pos)
def test_wall_detects_right_half_plane_root(reals, quads, bad):
    p = _poly_from_roots(reals, quads) * (X - bad)
    try:
        xs = wall_coefficients(p)
    except DegenerateDivision:
        return
    assert any(x.as_poly().constant_term() <= 0 for x in xs)


def test_refold_round_trip():
    xs = [rat("1/3"), rat("2"), rat("5/7")]
    f0, f1 = refold_wall(xs)
    d = sum((c.as_poly() * X ** k for k, c in enumerate(f0)), MultiPoly()) + \
        sum((c.as_poly() * X ** k for k, c in enumerate(f1)), MultiPoly())
    assert wall_coefficients(d) == xs


# -- roots of the quasisolution ---------------------------------------------

def test_root_data_11():
    assert root_form("11").arg == rat("(6*n^3+35*n^2+75*n+51)/(3*n+8)")


def test_family_difference_positive_from_thresholds():
    diff = root_form("l1").difference
    assert positive_rational(diff, {"n": 2, "l": 3}).passed


@pytest.mark.parametrize("case", HEUN_CASES, ids=lambda c: c.key)
def test_roots_negative(case):
    cert = certify_quasisolution_roots(case)
    assert cert.passed and reverify(cert)


# -- boundary bounds ---------------------------------------------------------

def test_bound_b_11():
    m = error_coeffs("11")
    cert = certify_bound(m.b_n, rat("(16*n-11)/(4*(8*n-1))"), 2)
    assert cert.passed and reverify(cert)


def test_zero_target_passes():
    assert certify_bound(rat(0), rat("1/5"), 1).passed


def test_error_bound_22():
    cert = certify_bound(error_target(ModeCase("22"), 3), rat("3/10"), 3, kind=Kind.BOUND_E0)
    assert cert.passed


def test_too_small_bound_fails():
    m = error_coeffs("11")
    assert not certify_bound(m.a_n, rat("1/100"), 2).passed


def test_esterror_12_matches_printed_polynomial():
    poly, _ = bound_polynomial(error_target(ModeCase("12"), 4), rat("1/3"))
    assert poly == parse_poly(ESTERROR_12)


def test_esterror_12_needs_fallback():
    cert = certify_bound(error_target(ModeCase("12"), 4), rat("1/3"), 4, kind=Kind.BOUND_E0)
    assert cert.passed and cert.witness["t_shift"] >= 1 and reverify(cert)
    poly = cert.witness["polynomial"]
    assert not nonpositive_with_fallback(poly, {"T": 0}, allow_fallback=False)[0]


def test_integral_parts_are_coprime_integer_polynomials():
    num, den = integral_parts(rat("(3*n/4 + 1/2)/(n/6)"))
    assert num == 9 * N + 6 and den == 2 * N


def test_halfline_and_scaled_tail():
    assert negative_on_halfline(-(T * T) - 1)
    assert not negative_on_halfline(T - 1)
    p = -(T * T) + 3 * N * N * T - 100 * N ** 4
    assert scaled_tail_certificate(p, 1)["tail_start"] > 1
    assert scaled_tail_certificate(T * T - N, 1) is None


@pytest.mark.parametrize("key", ["11", "22"])
def test_bound_sampling_soundness(key):
    m = error_coeffs(key)
    rng = random.Random(7)
    for _ in range(250):
        n = rng.randint(m.n0, 400)
        t = Fraction(rng.randint(-4000, 4000), rng.randint(1, 40))
        lam = QComplex(0, t)
        for target, bound in ((m.a_n, m.abar), (m.b_n, m.bbar)):
            v = QComplex.of(target.evaluate({"n": n, "x": lam}))
            b = bound.evaluate({"n": n})
            assert v.re ** 2 + v.im ** 2 <= b * b


# -- closure -----------------------------------------------------------------

def test_closure_11():
    cert = certify_closure("11")
    assert cert.passed and reverify(cert)


def test_closure_12():
    assert certify_closure("12", Fraction(1, 3)).passed


def test_closure_degenerate_bounds_fail():
    m = error_model("11").with_bounds("1/3", "0", 2, Fraction(3, 10))
    assert not certify_closure("11", model=m).passed


def test_closure_l3_is_tight_at_first_index():
    cert = certify_closure("l3")
    assert cert.passed
    assert cert.witness["weak_shifted"].constant_term() == 0


# -- Poincare and the hypergeometric case -----------------------------------

@pytest.mark.parametrize("key", ["10", "l2"])
def test_poincare(key):
    cert = certify_poincare(key)
    assert cert.passed
    assert cert.witness["limit_A"] == rat("3/2") and cert.witness["limit_B"] == rat("-1/2")


def _pochhammer_series(a: QComplex, b: QComplex, c: QComplex, count: int):
    out, term = [QComplex(1)], QComplex(1)
    for k in range(count):
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1))
        out.append(term)
    return out


@pytest.mark.parametrize("lam", [0, 1, QComplex(0, 2), QComplex(1, 3)])
def test_hypergeometric_series_is_gauss(lam):
    lam = lam if isinstance(lam, QComplex) else QComplex(lam)
    a, b, c = (lam + 3) / 2, (lam + 2) / 2, QComplex(Fraction(7, 2))
    assert operator_series(hypergeometric_operator(), 20, lam) == \
        _pochhammer_series(a, b, c, 20)


def test_hypergeometric_case():
    cert = certify_hypergeometric_case(HYPERGEOM_SAMPLES)
    assert cert.passed
    assert all(s["series_matches_gauss"] for s in cert.witness["samples"])


def test_hypergeometric_ratio_at_2i():
    cert = certify_hypergeometric_case(["2i"])
    assert cert.passed
    assert abs(complex(cert.witness["samples"][0]["ratio"]) - 1) < 0.02


# -- verdicts ------------------------------------------------------------------

@pytest.mark.parametrize("key", ["11", "l3"])
def test_verify_case_pass_and_witnesses(key):
    res = verify_case(key)
    assert res.verdict is Verdict.PASS and len(res.certificates) == 7
    assert all(reverify(c) for c in res.certificates)


def test_verify_01_routes_to_hypergeometric():
    res = verify_case("01")
    assert [c.kind for c in res.certificates] == [Kind.HYPERGEOM_DECAY]


def test_external_policy_defers_10():
    res = verify_case("10", corotational_policy="external")
    assert res.status == "EXTERNAL"


def test_derived_bounds_10():
    d = derive_bounds("10")
    assert d.n0 == 2 and d.u == Fraction(3, 10)
    assert d.abar == rat("(27405*n+13906)/(406000*n)")
    assert d.bbar == rat("(3104000*n-1537389)/(6111000*n)")
    assert all(c.passed for c in d.certificates)
