import json

import pytest

from modecert.errors import NotCertified
from modecert.exactmath import MultiPoly
from modecert.pipeline import (DEFAULT_FAMILIES, DEFAULT_FINITE, TAMPERED_10, RunConfig,
                               coverage_gaps, covering_cases, export_supplement, main,
                               read_supplement, run_all, supplement_entries)
from modecert.tables import SUPPLEMENT_VARIABLES

ALL_KEYS = DEFAULT_FINITE + DEFAULT_FAMILIES


def _small(**kw):
    base = dict(finite_cases=(), symbolic_families=(), lambda_samples=("0", "2i"), N=600,
                catalogue=False, controls=False)
    return RunConfig(**{**base, **kw})


def test_default_coverage_is_exact():
    assert coverage_gaps(ALL_KEYS) == {"gaps": [], "overlaps": []}


def test_each_pair_has_one_case():
    assert covering_cases(1, 1, ALL_KEYS) == ["11"]
    assert covering_cases(4, 3, ALL_KEYS) == ["l1"]
    assert covering_cases(3, 4, ALL_KEYS) == ["l3"]


def test_missing_family_leaves_gaps():
    keys = tuple(k for k in ALL_KEYS if k != "l3")
    gaps = coverage_gaps(keys, l_max=6)["gaps"]
    assert gaps == [(3, 4), (4, 5), (5, 6), (6, 7)]


def test_extra_case_overlaps():
    assert coverage_gaps(ALL_KEYS + ("44",))["overlaps"] == [(4, 4)]


def test_config_rejects_unstable_lambda_and_unknown_policy():
    with pytest.raises(ValueError):
        RunConfig(lambda_samples=("-1",))
    with pytest.raises(ValueError):
        RunConfig(corotational_policy="guess")


def test_tampered_row_fails_in_bound_certificate():
    rep = run_all(_small(finite_cases=("10",), quasi_overrides={"10": TAMPERED_10}))
    assert rep.verdict == "FAIL"
    failed = [c["kind"] for c in rep.cases[0]["certificates"] if c["verdict"] == "FAIL"]
    assert "BoundB" in failed


def test_hypergeometric_only_run():
    rep = run_all(_small(finite_cases=("01",)))
    assert rep.verdict == "PASS" and rep.coverage["gaps"]
    assert [c["kind"] for c in rep.cases[0]["certificates"]] == ["HypergeomDecay"]


def test_run_is_deterministic(tmp_path):
    cfg = _small(finite_cases=("11",), symbolic_families=("l2",))
    first, second = run_all(cfg), run_all(cfg)
    assert first.to_json(with_metadata=False) == second.to_json(with_metadata=False)
    js, txt = first.write(tmp_path)
    assert json.loads(js.read_text())["verdict"] == "PASS"
    assert "Convergence" in txt.read_text()


def test_output_dir_receives_csv(tmp_path):
    run_all(_small(finite_cases=("11",), lambda_samples=("1+3i",), output_dir=tmp_path))
    assert (tmp_path / "convergence_11_1p3i.csv").exists()
    assert (tmp_path / "report.json").exists()


def test_export_round_trip(tmp_path):
    path = export_supplement("11", tmp_path)
    assert path.name == "11.csv"
    back = read_supplement(path)
    assert tuple(back) == SUPPLEMENT_VARIABLES
    assert back["n0"].constant_value() == 2


def test_family_export_shifts_l():
    e = supplement_entries("l2")
    # every bound polynomial is in n, l, T with the shifts already applied
    assert set(e["esta"].variables()) <= {"n", "l", "T"}
    assert isinstance(e["esterror"], MultiPoly)


def test_export_refuses_case_without_bounds():
    with pytest.raises(NotCertified):
        supplement_entries("10")


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["convergence", "1", "1", "0", "2", "--n-tail", "600"]) == 0
    assert json.loads(capsys.readouterr().out)["lambda"] == "2i"
    assert main(["case", "0", "1", "--n-tail", "100"]) == 0
    assert main(["case", "1", "0", "--n-tail", "100", "--lambda-grid", "0",
                 "--corotational-policy", "external"]) == 1
    assert main(["case", "2", "5"]) == 2
    assert main(["export-supplement", "21", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "21.csv").exists()


def test_cli_family_case():
    assert main(["case", "l", "l+1", "--n-tail", "100"]) == 0
