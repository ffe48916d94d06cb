from fractions import Fraction

import pytest

from modecert.errors import UnsupportedCase
from modecert.exactmath import ZERO, MultiPoly, var
from modecert.spherical import (CATALOGUED_CASES, Y, casimir_apply, clebsch_gordan_basis,
                                coefficient_rank, field, inner_product, is_zero, laplace_apply,
                                mode_catalogue, momentum_coupling_apply, reduced_linearized,
                                scale, sphere_moment)

y1, y2, y3 = Y
R2 = y1 * y1 + y2 * y2 + y3 * y3


def test_basis_01_is_constant_frame():
    comps = [z.components for z in clebsch_gordan_basis(0, 1)]
    assert comps == [field(1, 0, 0), field(0, 1, 0), field(0, 0, 1)]


def test_basis_10_is_position():
    (z,) = clebsch_gordan_basis(1, 0)
    assert z.components == field(y1, y2, y3) and z.homogeneity_degree == 1


def test_basis_21_third_member():
    z = clebsch_gordan_basis(2, 1)[2]
    assert z.components == field(-3 * y1 * y3, -3 * y2 * y3, y1 * y1 + y2 * y2 - 2 * y3 * y3)


def test_unknown_pair_rejected():
    with pytest.raises(UnsupportedCase):
        clebsch_gordan_basis(3, 3)


def test_coupling_kills_constants():
    z = clebsch_gordan_basis(0, 1)[0]
    assert is_zero(momentum_coupling_apply(z).components)


def test_coupling_on_position():
    z = clebsch_gordan_basis(1, 0)[0]
    assert momentum_coupling_apply(z).components == scale(-2, z.components)


@pytest.mark.parametrize("lm", CATALOGUED_CASES)
def test_eigenrelations(lm):
    for z in clebsch_gordan_basis(*lm):
        l, m = lm
        assert z.is_homogeneous()
        assert casimir_apply(z).eigenvalue == m * (m + 1)
        assert laplace_apply(z).eigenvalue == -l * (l + 1)


def test_casimir_values_from_examples():
    assert casimir_apply(clebsch_gordan_basis(0, 1)[0]).eigenvalue == 2
    assert casimir_apply(clebsch_gordan_basis(1, 0)[0]).eigenvalue == 0
    assert casimir_apply(clebsch_gordan_basis(1, 2)[0]).eigenvalue == 6
    z = clebsch_gordan_basis(2, 1)[1]
    assert casimir_apply(z).exact


def test_sphere_moments():
    assert sphere_moment(0, 0, 0) == 1
    assert sphere_moment(2, 0, 0) == Fraction(1, 3)
    assert sphere_moment(2, 2, 0) == Fraction(1, 15)
    assert sphere_moment(1, 0, 0) == 0


@pytest.mark.parametrize("lm", [(0, 1), (1, 1), (2, 1)])
def test_orthogonality(lm):
    zs = [z.components for z in clebsch_gordan_basis(*lm)]
    for i, a in enumerate(zs):
        for j, b in enumerate(zs):
            assert (inner_product(a, b) == 0) == (i != j)


def test_basis_12_independent_but_not_orthogonal():
    zs = [z.components for z in clebsch_gordan_basis(1, 2)]
    assert coefficient_rank(zs) == 5
    assert inner_product(zs[0], zs[3]) != 0


def test_catalogue_counts():
    modes = mode_catalogue()
    assert len(modes) == 13
    assert sum(m.growth_rate == 1 for m in modes) == 4
    assert sum(m.growth_rate == 0 for m in modes) == 9


def test_catalogue_entries_from_examples():
    by_name = {m.name: m for m in mode_catalogue()}
    phi = by_name["Phi_01^1"]
    assert phi.profile == field(R2 - 3, ZERO, ZERO)
    assert str(phi.radial_factor) == str((var("r") * var("r") - 3))
    assert by_name["Psi_11^3"].profile == field(-y2, y1, ZERO)


def test_catalogue_factorizes_and_is_independent():
    modes = mode_catalogue()
    assert all(is_zero(m.factorization_residual()) for m in modes)
    assert coefficient_rank([m.profile for m in modes]) == 13


def test_catalogue_solves_reduced_operator():
    for m in mode_catalogue():
        assert is_zero(reduced_linearized(m.profile, m.growth_rate)), m.name


def test_wrong_rate_is_not_a_solution():
    m = mode_catalogue()[0]
    assert not is_zero(reduced_linearized(m.profile, 0))
    assert not is_zero(reduced_linearized(field(MultiPoly.const(1), ZERO, ZERO), 0))
