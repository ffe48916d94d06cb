from fractions import Fraction

import pytest

from modecert.cases import HEUN_CASES
from modecert.errors import InvalidIndex
from modecert.exactmath import rat, var
from modecert.odesystem import INFINITY, FormalPower, frobenius_indices
from modecert.standardform import (gamma_admissible, h_factor, heun_reduction,
                                   hypergeometric_operator, to_heun, to_hypergeometric)

Z, X, L = var("z"), var("x"), var("l")


def test_hypergeometric_parameters_symbolic():
    p = to_hypergeometric()
    assert (p.a, p.b, p.c) == (rat("(3+x)/2"), rat("(2+x)/2"), rat("7/2"))


@pytest.mark.parametrize("lam, abc", [(0, ("3/2", "1", "7/2")), (1, ("2", "3/2", "7/2"))])
def test_hypergeometric_parameters_at_rates(lam, abc):
    p = to_hypergeometric(lam)
    assert (p.a, p.b, p.c) == tuple(rat(v) for v in abc)


def test_hypergeometric_indices_at_infinity_have_real_part_at_least_one():
    roots = frobenius_indices(hypergeometric_operator(), INFINITY).roots
    for r in roots:
        p = r.as_poly()
        assert p.coeffs("x")[1].constant_term() > 0
        assert p.constant_term() >= 1


def test_heun_display_10():
    red = heun_reduction(1, 0)
    p, q = red.heun.normal_form()
    assert p == rat("7/(2*z) + x/(z-1) + 1/(2*(z-2))")
    assert q == rat("(z*(x^2+6*x+8) - x^2 - 12*x - 12)/(4*(z-2)*(z-1)*z)")


def test_canonical_parameters_10():
    hp = to_heun(1, 0)
    assert hp.gamma == rat("7/2") and hp.delta == rat("x") and hp.epsilon == rat("1/2")
    assert hp.a == rat(2)
    assert (hp.alpha * hp.beta).cancel() == rat("(x^2+6*x+8)/4")
    assert hp.q == rat("(x^2+12*x+12)/4")


def test_gamma_21():
    assert to_heun(2, 1).gamma == rat("9/2")


def test_h_factors():
    half = X * Fraction(1, 2)
    assert h_factor(1, 0).factors == FormalPower([(Z, 1), (2 - Z, half)]).factors
    assert h_factor(2, 1).factors == FormalPower([(Z, Fraction(3, 2)), (2 - Z, half)]).factors
    assert h_factor(5, 4).factors == FormalPower([(Z, Fraction(5, 2)), (2 - Z, half)]).factors


def test_h_factor_rejects_l_zero():
    with pytest.raises(InvalidIndex):
        h_factor(0, 1)


@pytest.mark.parametrize("case", HEUN_CASES, ids=lambda c: c.key)
def test_regularity_at_infinity(case):
    assert to_heun(case).regularity_defect().is_zero()


@pytest.mark.parametrize("case", HEUN_CASES, ids=lambda c: c.key)
def test_one_minus_gamma_not_natural(case):
    assert gamma_admissible(to_heun(case).gamma, case.l_min if case.is_family else 1)


@pytest.mark.parametrize("case", HEUN_CASES, ids=lambda c: c.key)
def test_heun_form_undoes_to_mobius_equation(case):
    red = heun_reduction(case)
    back = red.params.operator().conjugate(h_factor(case).inverse().log_derivative("z"))
    assert back.normal_form() == red.mobius.normal_form()


def test_family_gamma_is_linear_in_l():
    assert to_heun(L, L).gamma == rat("(2*l+3)/2")
