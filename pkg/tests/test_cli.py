"""Command-line surface: formats, schema stability, exit codes."""

import csv
import io
import json

from khinchin import cli


def run_capture(argv, capsys):
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_moments_bernoulli_example(capsys):
    code, out, err = run_capture(
        ["moments", "--model", "poly:1,1", "--t", "1", "--order", "4"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert float(rows[0]["mean"]) == 0.5
    assert float(rows[0]["variance"]) == 0.25
    assert float(rows[0]["nu3"]) == 0.0
    assert float(rows[0]["nu4"]) == 1.0


def test_criteria_exp_json_verdict(capsys):
    code, out, _ = run_capture(
        ["criteria", "--model", "exp", "--kmax", "6", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1
    assert doc["verdict"] == "gaussian-evidence"
    assert doc["classifications"]["3"] == "vanishing"
    assert len(doc["rows"]) == 15


def test_json_round_trip_byte_identical(capsys):
    code, out, _ = run_capture(
        ["cumulants", "--model", "geometric", "--t-grid", "0.2,0.5,0.8",
         "--kmax", "4", "--format", "json"], capsys)
    assert code == 0
    reparsed = json.dumps(json.loads(out), indent=2) + "\n"
    assert reparsed == out


def test_csv_and_json_numeric_agreement(capsys):
    argv = ["cumulants", "--model", "geometric", "--t-grid", "0.3,0.6", "--kmax", "3"]
    code_csv, out_csv, _ = run_capture(argv, capsys)
    code_json, out_json, _ = run_capture(argv + ["--format", "json"], capsys)
    assert code_csv == code_json == 0
    csv_rows = list(csv.DictReader(io.StringIO(out_csv)))
    json_rows = json.loads(out_json)["rows"]
    for crow, jrow in zip(csv_rows, json_rows):
        for key, val in jrow.items():
            if isinstance(val, float):
                assert float(crow[key]) == val  # shortest round-trip decimals


def test_family_meta_and_normalization(capsys):
    code, out, _ = run_capture(
        ["family", "--model", "exp", "--t", "2", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["tail_mass_bound"] < 1e-12
    total = sum(row["prob"] for row in doc["rows"])
    assert abs(total - 1.0) < 1e-11


def test_jobs_ordering_independent(capsys):
    argv = ["ks", "--model", "geometric", "--t-grid", "0.3,0.5,0.7"]
    _, serial, _ = run_capture(argv + ["--jobs", "1"], capsys)
    _, parallel, _ = run_capture(argv + ["--jobs", "3"], capsys)
    srows = list(csv.DictReader(io.StringIO(serial)))
    prows = list(csv.DictReader(io.StringIO(parallel)))
    assert [r["t"] for r in srows] == [r["t"] for r in prows]
    for sr, pr in zip(srows, prows):
        assert abs(float(sr["ks_distance"]) - float(pr["ks_distance"])) < 1e-9


def test_validation_exit_code(capsys):
    code, _, err = run_capture(["family", "--model", "nope", "--t", "0.5"], capsys)
    assert code == 2
    payload = json.loads(err.strip())
    assert payload["error_code"] == "model-spec"

    code2, _, err2 = run_capture(["family", "--model", "geometric", "--t", "2"], capsys)
    assert code2 == 2
    assert json.loads(err2.strip())["error_code"] == "domain"


def test_budget_exit_code(capsys, monkeypatch):
    original = cli.parse_model

    def tiny_budget(spec):
        model = original(spec)
        model.term_budget = 40
        return model

    monkeypatch.setattr(cli, "parse_model", tiny_budget)
    code, _, err = run_capture(["family", "--model", "geometric", "--t", "0.9"], capsys)
    assert code == 3
    assert json.loads(err.strip())["error_code"] == "budget"


def test_out_file_and_plot(tmp_path, capsys):
    out_path = tmp_path / "report.csv"
    code, stdout, _ = run_capture(
        ["ks", "--model", "geometric", "--t-grid", "0.3,0.5,0.7",
         "--out", str(out_path), "--plot"], capsys)
    assert code == 0
    assert stdout == ""
    assert out_path.exists()
    png = tmp_path / "report.png"
    assert png.exists() and png.stat().st_size > 0


def test_euler_subcommand(capsys):
    code, out, _ = run_capture(
        ["euler", "--m", "1", "--p", "1", "--k", "2", "--s", "0.5,0.1"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["holds"] for r in rows] == ["true", "true"]


def test_zerofree_subcommand(capsys):
    code, out, _ = run_capture(
        ["zerofree", "--model", "poly:1,1", "--t", "1"], capsys)
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert float(row["sigma"]) == 0.5
    assert float(row["min_modulus"]) > 0.0


def test_asymptotics_subcommand(capsys):
    code, out, _ = run_capture(
        ["asymptotics", "--model", "macmahon", "--m", "0", "--s", "0.05,0.01"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert abs(float(rows[-1]["constant"]) - 1.2020569031595943) < 1e-12
    assert abs(float(rows[-1]["ratio"]) - 1.0) < 0.01


def test_bad_flags_exit_code(capsys):
    assert cli.run(["criteria"]) == 2  # missing --model
    assert cli.run(["nonsense"]) == 2
