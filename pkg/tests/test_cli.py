"""Command-line client: outputs, exit codes, figure dataset files."""

import csv
import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from bailout_dividends.cli import main
from bailout_dividends.levy import paper_model


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture()
def model_file(tmp_path):
    p = tmp_path / "model.json"
    p.write_text(json.dumps(paper_model().to_dict()))
    return str(p)


def test_scale_command(runner):
    res = runner.invoke(main, ["scale", "--q", "0.1", "--points", "1,2",
                               "--functions", "w,z"])
    assert res.exit_code == 0, res.output
    body = json.loads(res.output)
    assert len(body["values"]["w"]) == 2


def test_model_file_roundtrip(runner, model_file):
    res = runner.invoke(main, ["barrier", "--model", model_file,
                               "--q", "0.1", "--lam", "2"])
    default = runner.invoke(main, ["barrier", "--q", "0.1", "--lam", "2"])
    assert res.exit_code == 0
    assert res.output == default.output


def test_constrained_command_infeasible_is_status(runner):
    res = runner.invoke(main, ["constrained", "--q", "0.1", "--x", "3",
                               "--K", "0.1"])
    assert res.exit_code == 0
    assert json.loads(res.output)["status"] == "infeasible"


def test_missing_q_is_config_error(runner):
    res = runner.invoke(main, ["barrier", "--lam", "2"])
    assert res.exit_code == 2


def test_bad_model_file_is_config_error(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    res = runner.invoke(main, ["barrier", "--model", str(bad),
                               "--q", "0.1", "--lam", "2"])
    assert res.exit_code == 2


def test_domain_error_exit_code(runner):
    res = runner.invoke(main, ["thresholds", "--q", "0.1", "--lam", "2",
                               "--delta", "-1"])
    assert res.exit_code == 2


def test_simulate_byte_identical(runner, tmp_path):
    args = ["simulate", "--q", "0.1", "--x", "1",
            "--policy", '{"type":"barrier","a":2.0}',
            "--paths", "300", "--horizon", "15", "--seed", "4"]
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    r1 = runner.invoke(main, args + ["--out", str(out1)])
    r2 = runner.invoke(main, args + ["--out", str(out2)])
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_simulate_bad_policy_json(runner):
    res = runner.invoke(main, ["simulate", "--q", "0.1", "--x", "1",
                               "--policy", "{oops", "--paths", "10"])
    assert res.exit_code == 2


def test_figure3_outputs(runner, tmp_path):
    out = tmp_path / "figs"
    res = runner.invoke(main, ["figure3", "--q", "0.1", "--out", str(out),
                               "--x-grid", "0.5,1,2"])
    assert res.exit_code == 0, res.output
    th_path = out / "figure3_thresholds.csv"
    assert th_path.exists()
    with open(th_path) as f:
        rows = list(csv.DictReader(f))
    lam1 = rows[0]
    assert float(lam1["lambda"]) == 1.0
    assert float(lam1["a_lambda"]) == 0.0
    assert float(lam1["c1"]) == 0.0


def test_figure1_envelope_property(runner, tmp_path):
    out = tmp_path / "figs"
    res = runner.invoke(main, ["figure1", "--q", "0.1", "--out", str(out),
                               "--x-grid", "1,2,3",
                               "--lambda-grid", "1.5,2,3,5"])
    assert res.exit_code == 0, res.output
    with open(out / "figure1_envelope.csv") as f:
        rows = list(csv.DictReader(f))
    assert rows, "envelope table is empty"
    for row in rows:
        assert float(row["envelope"]) <= float(row["curve_value"]) + 1e-12


def test_figure4_comparison_table(runner, tmp_path):
    out = tmp_path / "figs"
    res = runner.invoke(main, ["figure4", "--q", "0.1", "--out", str(out),
                               "--x-grid", "3", "--lambda-grid", "1.5,2,3"])
    assert res.exit_code == 0, res.output
    with open(out / "figure4_lambda_comparison.csv") as f:
        rows = list(csv.DictReader(f))
    for row in rows:
        assert (float(row["lambda_star_with_cost"])
                < float(row["lambda_star_no_cost"]))


def test_figure_json_format(runner, tmp_path):
    out = tmp_path / "figs"
    res = runner.invoke(main, ["figure3", "--q", "0.1", "--out", str(out),
                               "--x-grid", "1", "--format", "json"])
    assert res.exit_code == 0, res.output
    data = json.loads((out / "figure3_thresholds.json").read_text())
    assert data["headers"][0] == "lambda"
