"""End-to-end CLI tests: exit codes, JSON reports, reproducibility."""

import json

import numpy as np
import pytest

from nsgleason.cli import main
from nsgleason.linalg import make_rng, random_density
from nsgleason.nosig import singlet


@pytest.fixture
def singlet_file(tmp_path):
    path = tmp_path / "singlet.json"
    path.write_text(json.dumps(singlet().to_json()))
    return str(path)


@pytest.fixture
def rho_file(tmp_path):
    rho = random_density(make_rng(0), (3, 3))
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(rho.to_json()))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_chsh_optimize_singlet(singlet_file, capsys):
    code, rep = run(
        ["chsh", "--t", singlet_file, "--optimize", "--restarts", "8", "--seed", "7"],
        capsys,
    )
    assert code == 0
    assert rep["chsh_value"] == pytest.approx(2 * np.sqrt(2), abs=1e-4)
    assert rep["verdicts"]["tsirelson"]["pass"]


def test_twist_example_replay(capsys):
    code, rep = run(["twist", "--fig1"], capsys)
    assert code == 0
    assert rep["verdicts"]["certificate_replay"]["pass"]
    assert rep["verdicts"]["intermediate_valid"]["pass"]


def test_reconstruct_round_trip(rho_file, capsys):
    code, rep = run(["reconstruct", "--operator", rho_file, "--seed", "1"], capsys)
    assert code == 0
    assert rep["verdicts"]["round_trip_frobenius"]["pass"]
    assert rep["verdicts"]["unit_trace"]["pass"]
    assert rep["classification"] == "DENSITY_MATRIX"


def test_classify_singlet(singlet_file, capsys):
    code, rep = run(["classify", "--t", singlet_file], capsys)
    assert code == 0
    # The singlet is its own (PSD) Choi matrix, hence completely positive;
    # its partial transpose has a negative eigenvalue, so the flip fails.
    assert rep["orientation"]["class"] == "CP"
    assert rep["orientation"]["min_eig_flipped_choi"] == pytest.approx(-0.5, abs=1e-10)


def test_section_consistency(rho_file, capsys):
    code, rep = run(["section", "--t", rho_file, "--contexts", "5"], capsys)
    assert code == 0
    assert rep["verdicts"]["section_consistent"]["pass"]


def test_keller_exhaustive_gstar_none(capsys):
    code, rep = run(
        ["keller", "search", "--n", "2", "--size", "4", "--graph", "gstar",
         "--exhaustive"],
        capsys,
    )
    assert code == 1
    assert not rep["verdicts"]["clique_found"]["pass"]
    assert "no clique exists" in rep["verdicts"]["clique_found"]["note"]


def test_keller_exhaustive_g_found(tmp_path, capsys):
    out_clique = str(tmp_path / "c.txt")
    code, rep = run(
        ["keller", "search", "--n", "2", "--size", "4", "--graph", "g",
         "--exhaustive", "--out-clique", out_clique],
        capsys,
    )
    assert code == 0
    assert rep["verdicts"]["clique_found"]["pass"]
    code2, rep2 = run(
        ["keller", "verify", "--file", out_clique, "--graph", "g"], capsys
    )
    assert code2 == 0
    assert rep2["report"]["tiling_certificate"]


def test_keller_basis_from_file(tmp_path, capsys):
    out_clique = str(tmp_path / "c.txt")
    run(
        ["keller", "search", "--n", "2", "--size", "4", "--graph", "g",
         "--exhaustive", "--out-clique", out_clique],
        capsys,
    )
    code, rep = run(
        ["keller", "basis", "--file", out_clique, "--graph", "g"], capsys
    )
    assert code == 0
    assert rep["verdicts"]["basis_valid"]["pass"]


def test_check_framefn_violation_exit_1(capsys):
    code, rep = run(
        ["check", "--dims", "3,3", "--theta", str(np.pi / 4), "--trials", "50",
         "--seed", "3"],
        capsys,
    )
    assert code == 1  # violation found — the expected outcome for this family
    assert rep["verdicts"]["framefn_no_signalling"]["value"] >= 1e-3


def test_prbox_exclusion(capsys):
    code, rep = run(
        ["prbox", "--samples", "400", "--schedule", "250,400", "--seed", "2"],
        capsys,
    )
    assert code == 0
    assert rep["extension"]["verdict"] == "INFEASIBLE"
    assert rep["verdicts"]["lp_bounds_nonincreasing"]["pass"]


def test_usage_error_exit_2(capsys):
    assert main(["not-a-command"]) == 2


def test_missing_file_exit_2(capsys):
    assert main(["classify", "--t", "/nonexistent.json"]) == 2


def test_reports_reproducible(singlet_file, capsys):
    def strip_timings(rep):
        rep = dict(rep)
        rep.pop("timings_ms", None)
        return rep

    _, rep1 = run(
        ["chsh", "--t", singlet_file, "--optimize", "--restarts", "4",
         "--seed", "11"], capsys,
    )
    _, rep2 = run(
        ["chsh", "--t", singlet_file, "--optimize", "--restarts", "4",
         "--seed", "11"], capsys,
    )
    assert strip_timings(rep1) == strip_timings(rep2)


def test_out_flag_writes_report(rho_file, tmp_path, capsys):
    out = str(tmp_path / "report.json")
    code, _ = run(
        ["section", "--t", rho_file, "--contexts", "3", "--out", out], capsys
    )
    assert code == 0
    with open(out) as fh:
        rep = json.load(fh)
    assert rep["verdicts"]["section_consistent"]["pass"]
