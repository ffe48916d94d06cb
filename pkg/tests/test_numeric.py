import csv
from fractions import Fraction

import pytest

from modecert.exactmath import QComplex
from modecert.numeric import (OVERLAP_TOLERANCE, constant_quasisolution_control, format_lambda,
                              grid_points, hybrid_ratios, pde_residual_grid, perturbed_mode,
                              sample_convergence, write_convergence_csv)
from modecert.recurrence import ratio_sequence
from modecert.spherical import add, mode_catalogue, scale

CATALOGUE = mode_catalogue()


def test_ratio_tends_to_one_11():
    rep = sample_convergence("11", 0, N=2000)
    assert rep.final_distance < 0.01 and not rep.anomalies


def test_error_stays_below_a_third_21():
    rep = sample_convergence("21", QComplex(0, 3), N=600)
    assert rep.max_abs_error_after_n0 <= Fraction(1, 3)


@pytest.mark.parametrize("key,lam", [("10", 1), ("33", QComplex(1, 3)), ("12", QComplex(0, 10))])
def test_sample_runs_clean(key, lam):
    rep = sample_convergence(key, lam, N=800)
    assert not rep.anomalies and rep.overlap_error <= OVERLAP_TOLERANCE


def test_hybrid_prefix_is_exact():
    seq, overlap = hybrid_ratios("22", QComplex(1, 3), 400, cutoff=60)
    assert seq[:61] == ratio_sequence("22", QComplex(1, 3), 60)
    assert overlap <= OVERLAP_TOLERANCE
    assert abs(complex(seq[60]) - complex(seq[61])) < 0.05


def test_negative_real_part_is_flagged():
    rep = sample_convergence("11", -1, N=50)
    assert any("Re lambda < 0" in a for a in rep.anomalies)


def test_constant_quasisolution_fails():
    rep = constant_quasisolution_control("11", 0)
    assert rep.max_abs_error_after_n0 > Fraction(1, 3)
    assert any("exceeds 1/3" in a for a in rep.anomalies)


def test_grid_stays_inside_unit_ball():
    pts = grid_points()
    assert len(pts) == 234
    assert all(0 < sum(c * c for c in p) <= Fraction(81, 100) for p in pts)


@pytest.mark.parametrize("idx", [0, 1, 4, 7, 10])
def test_catalogue_modes_have_zero_grid_residual(idx):
    assert pde_residual_grid(CATALOGUE[idx], grid_size=3) == 0


def test_perturbed_mode_has_residual():
    psi = CATALOGUE[0]
    assert pde_residual_grid(perturbed_mode(psi), grid_size=3, lam=psi.growth_rate) != 0


def test_same_rate_perturbation_is_still_a_solution():
    # e_1 is itself a rate-1 mode, so this is not a valid negative control
    psi, e1 = CATALOGUE[0], CATALOGUE[1]
    assert e1.growth_rate == psi.growth_rate
    assert pde_residual_grid(add(psi.profile, scale(Fraction(1, 10), e1.profile)),
                             grid_size=3, lam=1) == 0
    with pytest.raises(ValueError):
        perturbed_mode(psi, other=e1)


@pytest.mark.parametrize("z,text", [(0j, "0"), (2j, "2i"), (1 + 3j, "1+3i"), (1 - 3j, "1-3i"),
                                    (10j, "10i"), (1.5 + 0j, "1.5")])
def test_format_lambda(z, text):
    assert format_lambda(z) == text


def test_convergence_csv(tmp_path):
    rep = sample_convergence("11", QComplex(0, 2), N=40, keep_rows=True)
    path = write_convergence_csv(rep, tmp_path / "c.csv")
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["n", "re_r", "im_r", "abs_e"] and len(rows) == 41
    last = rows[-1]
    assert complex(float(last[1]), float(last[2])) == rep.final_ratio
