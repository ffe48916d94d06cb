from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from modecert.errors import InvalidIndex
from modecert.exactmath import MultiPoly, RationalExpr, nullspace, rat, var
from modecert.odesystem import (SUSY_CASES, derive_transformed_potential, frobenius_indices,
                                kernel_search, mode_ode, mode_ode_residual, potential,
                                susy_data, susy_operator, susy_transform, transformed_potential)

R = RationalExpr(var("r"))
L = var("l")


def test_potentials_from_table():
    assert potential(1, 0) == rat("(2*r^4 - 12*r^2 + 2)/(r^2*(1+r^2)^2)")
    assert potential(2, 1) == rat("(2*r^4 - 8*r^2 + 6)/(r^2*(1+r^2)^2)")
    assert potential(1, 1) == rat("(6*r^4 - 8*r^2 + 2)/(r^2*(1+r^2)^2)")


def test_invalid_pair_rejected():
    with pytest.raises(InvalidIndex):
        potential(2, 4)


def test_reference_solutions():
    assert mode_ode_residual(R * R / (1 + R * R), 0, 2, 1).is_zero()
    assert mode_ode_residual(RationalExpr(MultiPoly()), 3, 1, 1).is_zero()
    assert not mode_ode_residual(R * R / (1 + R * R), 1, 2, 1).is_zero()


def test_non_smooth_partner_solves_untransformed_equation():
    assert mode_ode_residual(R / (1 - R ** 4), 2, 1, 1).is_zero()


def test_kernel_of_transform():
    assert susy_transform(R * R / (1 + R * R), 0, 2, 1).is_zero()
    assert susy_transform(R / (1 - R ** 4), 2, 1, 1).is_zero()
    assert susy_transform(1 / (1 + R * R), 1, 0, 1).is_zero()


def test_kernel_search_finds_only_listed_elements():
    found = kernel_search(1, 1, 2)
    assert len(found) == 1
    assert (found[0] / (R / (1 - R ** 4))).cancel().is_polynomial()
    assert kernel_search(1, 1, 1) == []


def test_transformed_potentials():
    assert transformed_potential(2, 1) == rat("12/(r^2*(1+r^2))")
    assert transformed_potential(1, 1) == rat("(6-2*r^4)/(r^2*(1+r^2))")
    assert transformed_potential(3, 2) == potential(3, 2)


@pytest.mark.parametrize("lm", SUSY_CASES)
def test_transformed_potential_is_rate_free(lm):
    d = derive_transformed_potential(*lm)
    assert d.consistent and d.lambda_free
    assert d.transformed_potential == susy_data(*lm).transformed_potential


@pytest.mark.parametrize("l", range(1, 7))
def test_trivial_extension(l):
    for m in (l - 1, l, l + 1):
        if (l, m) not in SUSY_CASES:
            assert transformed_potential(l, m) == potential(l, m)


def test_indices_at_origin():
    assert set(frobenius_indices(mode_ode(L, L), 0).roots) == {rat("l"), rat("-l-1")}
    assert set(frobenius_indices(mode_ode(0, 1, transformed=True), 0).roots) == \
        {rat(2), rat(-3)}


def test_indices_at_light_cone():
    assert set(frobenius_indices(mode_ode(L, L + 1), 1).roots) == {rat(0), rat("1-x")}


# -- intertwining on local series -------------------------------------------

R0 = Fraction(1, 2)
ORDER = 10


def _low_coeffs(e: RationalExpr, count: int) -> list[Fraction]:
    """First Taylor coefficients of e about r = 1/2 (power-series division)."""
    e = e.cancel()

    def shifted(p: MultiPoly) -> list[Fraction]:
        q = p.shift("r", R0)
        cs = list(q.univariate_coeffs("r")) if not q.is_zero() else []
        return cs + [Fraction(0)] * count

    num, den = shifted(e.num), shifted(e.den)
    assert den[0] != 0
    out: list[Fraction] = []
    for j in range(count):
        out.append((num[j] - sum(den[i] * out[j - i] for i in range(1, j + 1))) / den[0])
    return out


def local_solution(op, a: Fraction, b: Fraction) -> RationalExpr:
    """Truncated series solution about r = 1/2 (residual O(s^(ORDER-1)))."""
    s = R - R0
    images = [op(s ** k) for k in range(ORDER + 1)]
    rows = [dict() for _ in range(ORDER - 1)]
    for k, img in enumerate(images):
        for j, c in enumerate(_low_coeffs(img * img.den * 0 + img, ORDER - 1)):
            if c:
                rows[j][k] = c
    basis = nullspace(rows, ORDER + 1)
    assert len(basis) == 2
    coeffs = [a * u + b * v for u, v in zip(*basis)]
    return sum((c * s ** k for k, c in enumerate(coeffs)), RationalExpr(MultiPoly()))


@settings(max_examples=50)
@given(st.sampled_from(SUSY_CASES),
       st.fractions(min_value=-3, max_value=3, max_denominator=4),
       st.fractions(min_value=-2, max_value=2, max_denominator=5),
       st.fractions(min_value=-2, max_value=2, max_denominator=5))
def test_intertwining_on_local_series(lm, lam, a, b):
    if a == 0 and b == 0:
        a = Fraction(1)
    base = mode_ode(*lm, lam).operator()
    f = local_solution(base, a, b)
    s_op = susy_operator(*lm, lam)
    image = mode_ode(*lm, lam, transformed=True).operator()(s_op(f))
    keep = ORDER - 1 - s_op.order
    assert _low_coeffs(image, keep) == [0] * keep
