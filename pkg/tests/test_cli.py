import csv
import json
import math

import pytest

from ddfkit.cli import main

ROOT_REFERENCE = 2.0 * math.sqrt(3.0) - 3.0


@pytest.fixture()
def tech_file(tmp_path):
    path = tmp_path / "ref.json"
    path.write_text(json.dumps(
        {"kind": "quadratic_separable", "b": [1, 1], "a": [1, 1], "B": [[1, 0], [0, 1]]}
    ))
    return str(path)


@pytest.fixture()
def bad_tech_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(
        {"kind": "quadratic_separable", "b": [1, 1], "a": [1, 1], "B": [[1, 2], [2, 1]]}
    ))
    return str(path)


@pytest.fixture()
def poly_file(tmp_path):
    path = tmp_path / "poly.json"
    path.write_text(json.dumps({"kind": "polyhedral_a"}))
    return str(path)


EVAL_ARGS = ["--y", "0.5,0.5", "--x", "1,1", "--gy", "0.5,0.5", "--gx", "0,0"]


def run_json(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, json.loads(out)


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def test_eval_closed(capsys, tech_file):
    rc = main(["eval", tech_file, *EVAL_ARGS, "--method", "closed"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "0.464101615138" in out
    assert "method: closed" in out


def test_eval_bisect_reports_iterations(capsys, tech_file):
    rc, report = run_json(capsys, ["eval", tech_file, *EVAL_ARGS, "--method", "bisect", "--json"])
    assert rc == 0
    assert report["results"]["method"] == "bisect"
    assert report["results"]["iterations"] > 0
    assert abs(report["results"]["value"] - ROOT_REFERENCE) <= 1e-8


def test_eval_grid_within_step(capsys, tech_file):
    rc, report = run_json(
        capsys, ["eval", tech_file, *EVAL_ARGS, "--method", "grid", "--step", "1e-3", "--json"]
    )
    assert rc == 0
    assert abs(report["results"]["value"] - ROOT_REFERENCE) <= 1e-3
    assert report["results"]["truncated"] is True


def test_eval_zero_bundle(capsys, tech_file):
    rc, report = run_json(
        capsys,
        ["eval", tech_file, "--y", "0,0", "--x", "0,0", "--gy", "1,1", "--gx", "1,1", "--json"],
    )
    assert rc == 0
    assert report["results"]["value"] == 0.0


def test_eval_neg_inf_rendered(capsys, poly_file):
    rc, report = run_json(
        capsys,
        ["eval", poly_file, "--y", "0,5", "--x", "1", "--gy", "1,0", "--gx", "0", "--json"],
    )
    assert rc == 0
    assert report["results"]["value"] == "-inf"
    rc = main(["eval", poly_file, "--y", "0,5", "--x", "1", "--gy", "1,0", "--gx", "0"])
    assert "value: -inf" in capsys.readouterr().out


def test_eval_invalid_params_exit_2(capsys, bad_tech_file):
    rc = main(["eval", bad_tech_file, *EVAL_ARGS])
    err = capsys.readouterr().err
    assert rc == 2
    assert "positive semidefinite" in err


def test_eval_dimension_mismatch_exit_3(capsys, tech_file):
    rc = main(["eval", tech_file, "--y", "0.5", "--x", "1,1", "--gy", "1", "--gx", "0,0"])
    assert rc == 3


def test_eval_closed_on_polyhedral_exit_2(capsys, poly_file):
    rc = main(["eval", poly_file, "--y", "1,1", "--x", "1", "--gy", "1,0", "--gx", "0", "--method", "closed"])
    assert rc == 2


def test_eval_unparseable_vector_exit_2(capsys, tech_file):
    rc = main(["eval", tech_file, "--y", "a,b", "--x", "1,1", "--gy", "1,1", "--gx", "0,0"])
    assert rc == 2


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def test_check_passes(capsys, tech_file):
    rc = main(["check", tech_file, "--samples", "40", "--seed", "1"])
    out = capsys.readouterr().out
    assert rc == 0
    for prop in ("D1", "D2", "D3", "D4", "D5", "D6"):
        assert f"{prop}: PASS" in out
    assert "overall: PASS" in out


def test_check_f_props(capsys, tech_file):
    rc = main(["check", tech_file, "--props", "F1,F3,F4,T1,T4,T5", "--samples", "40", "--seed", "2"])
    assert rc == 0
    assert "overall: PASS" in capsys.readouterr().out


def test_check_rejects_polyhedral(capsys, poly_file):
    rc = main(["check", poly_file])
    assert rc == 2


def test_check_rejects_invalid_params(capsys, bad_tech_file):
    rc = main(["check", bad_tech_file])
    err = capsys.readouterr().err
    assert rc == 2
    assert "positive semidefinite" in err


def test_check_unknown_property(capsys, tech_file):
    rc = main(["check", tech_file, "--props", "D7"])
    assert rc == 2


def test_check_deterministic_reports(capsys, tech_file):
    rc1, rep1 = run_json(capsys, ["check", tech_file, "--samples", "30", "--seed", "4", "--json"])
    rc2, rep2 = run_json(capsys, ["check", tech_file, "--samples", "30", "--seed", "4", "--json"])
    assert rc1 == rc2 == 0
    rep1.pop("timing_s")
    rep2.pop("timing_s")
    assert rep1 == rep2


def test_seed_env_default(capsys, tech_file, monkeypatch):
    monkeypatch.setenv("DDFKIT_SEED", "77")
    rc, report = run_json(capsys, ["check", tech_file, "--samples", "10", "--json"])
    assert rc == 0
    assert report["seed"] == 77


def test_check_failing_property_exits_1(capsys, tech_file, monkeypatch):
    # force a failing report to pin the exit-code contract
    from ddfkit.core import PropertyReport
    import ddfkit.cli as cli

    def fake_check(tech, prop, samples, seed):
        return PropertyReport(prop, False, samples, seed, 1e-8, 1.0, None)

    monkeypatch.setattr(cli, "check_property", fake_check)
    rc = main(["check", tech_file, "--props", "D1", "--samples", "5", "--seed", "0"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "overall: FAIL" in out


# ---------------------------------------------------------------------------
# demo
# ---------------------------------------------------------------------------

def test_demo_example_216(capsys):
    rc = main(["demo", "example-2-1-6"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "(0.5,1) ∉ Eff P(1): true" in out
    assert "1 ∈ Eff L(0.5,1): true" in out
    assert "isoquant JPF on grid: holds" in out
    assert "efficient JPF on grid: does not hold" in out


def test_demo_example_219(capsys):
    rc, report = run_json(capsys, ["demo", "example-2-1-9", "--json"])
    assert rc == 0
    assert report["results"]["weff_differs_from_eff"] is True
    assert report["results"]["t_equals_y2"] is True


def test_demo_staircase(capsys):
    rc = main(["demo", "staircase"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "1 ∈ Isoq P(2): true" in out
    assert "2 ∈ Isoq L(1): false" in out
    assert "isoquant JPF on grid: does not hold" in out


def test_demo_quadratic_homogeneity(capsys, tmp_path):
    rc, report = run_json(
        capsys, ["demo", "quadratic-homogeneity", "--seed", "7", "--json", "--out-dir", str(tmp_path)]
    )
    assert rc == 0
    assert report["results"]["deviation_exceeds_1e-3"] is True
    assert report["results"]["translation_residual_below_1e-10"] is True
    assert report["results"]["max_deviation"] > 1e-3


def test_demo_figure_data(capsys, tmp_path):
    rc, report = run_json(capsys, ["demo", "figure-data", "--out-dir", str(tmp_path), "--json"])
    assert rc == 0
    names = set(report["results"]["files"])
    assert names == {
        "figure-data_fig1_boundary.csv",
        "figure-data_fig2_boundary.csv",
        "figure-data_fig3_frontier.csv",
        "figure-data_fig3_direction1.csv",
        "figure-data_fig3_direction2.csv",
        "figure-data_fig4_line_restriction.csv",
    }
    # the sampled line restriction vanishes at the closed-form root
    with open(tmp_path / "figure-data_fig4_line_restriction.csv") as fh:
        rows = list(csv.DictReader(fh))
    hit = [r for r in rows if abs(float(r["beta"]) - ROOT_REFERENCE) < 1e-9]
    assert hit and abs(float(hit[0]["value"])) <= 1e-9
    # one projection saturates the transformation constraint, one stops at
    # the input axis
    cases = {v["case"] for v in report["results"]["projections"].values()}
    assert cases == {"proper", "full"}


def test_demo_unknown_name(capsys):
    rc = main(["demo", "no-such-demo"])
    assert rc == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
