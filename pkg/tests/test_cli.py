import csv
import json
from importlib import resources

import jsonschema
import pytest

from pythmod.cli import SWEEP_COLUMNS, main


@pytest.fixture(scope="module")
def schema():
    ref = resources.files("pythmod") / "schemas" / "run_record.schema.json"
    return json.loads(ref.read_text())


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    record = json.loads(out) if out.strip() else None
    return code, record


def strip_volatile(record):
    """Drop wall-clock fields before comparing reruns."""
    clean = json.loads(json.dumps(record))
    clean["manifest"].pop("seconds", None)
    clean["result"].pop("seconds", None)
    return clean


def test_param_subcommand(capsys, schema):
    code, rec = run_cli(capsys, "param", "--p", "7", "--n", "1")
    assert code == 0
    jsonschema.validate(rec, schema)
    assert rec["result"]["admissible_t"] == [2, 3, 4, 5]
    assert rec["result"]["count"] == 4
    assert rec["manifest"]["subcommand"] == "param"
    assert rec["manifest"]["params"]["p"] == 7


def test_param_points_flag(capsys, schema):
    code, rec = run_cli(capsys, "param", "--p", "7", "--n", "1", "--points")
    assert code == 0
    jsonschema.validate(rec, schema)
    pts = {tuple(pair) for pair in rec["result"]["circle_points"]}
    sols = {tuple(pair) for pair in rec["result"]["circle_solutions"]}
    assert pts == sols == {(5, 5), (5, 2), (2, 5), (2, 2)}


def test_gauss_subcommand(capsys, schema):
    code, rec = run_cli(capsys, "gauss", "--q", "9")
    assert code == 0
    jsonschema.validate(rec, schema)
    assert rec["result"]["closed"]["re"] == pytest.approx(3.0)
    assert rec["result"]["bruteforce"]["re"] == pytest.approx(3.0, abs=1e-9)
    assert rec["result"]["oracle_diff"] <= rec["result"]["tolerance"]


def test_poisson_subcommand(capsys, schema):
    code, rec = run_cli(capsys, "poisson", "--s", "1.0")
    assert code == 0
    jsonschema.validate(rec, schema)
    assert rec["result"]["lhs"] == pytest.approx(1.0864348112, abs=1e-9)
    assert rec["result"]["diff"] <= 1e-12


def test_triples_subcommand(capsys, schema):
    code, rec = run_cli(capsys, "triples", "--N", "5")
    assert code == 0
    jsonschema.validate(rec, schema)
    assert rec["result"]["count"] == 57


def test_transition_subcommand(capsys, schema):
    code, rec = run_cli(capsys, "transition", "--p", "7", "--n", "6", "--N", "50")
    assert code == 0
    jsonschema.validate(rec, schema)
    assert rec["result"]["equal"] is True
    assert rec["result"]["congruence_count"] == rec["result"]["equation_count"] == 240


def test_transition_range_violation(capsys):
    code, _ = run_cli(capsys, "transition", "--p", "7", "--n", "2", "--N", "10")
    assert code == 2


def test_count_subcommand(capsys, schema, tmp_path):
    out = tmp_path / "report.json"
    code, rec = run_cli(
        capsys, "count", "--p", "7", "--n", "1", "--N", "3",
        "--method", "triple-loop", "--exact", "--out", str(out),
    )
    assert code == 0
    jsonschema.validate(rec, schema)
    assert rec["result"]["method"] == "triple-loop"
    assert rec["result"]["exact_box_count"] is not None
    on_disk = json.loads(out.read_text())
    assert on_disk == rec


def test_count_small_prime_exit_2(capsys):
    code, _ = run_cli(capsys, "count", "--p", "5", "--n", "3", "--N", "100")
    assert code == 2


def test_count_cross_method_agreement(capsys):
    _, rec1 = run_cli(capsys, "count", "--p", "7", "--n", "1", "--N", "3",
                      "--method", "triple-loop")
    _, rec2 = run_cli(capsys, "count", "--p", "7", "--n", "1", "--N", "3",
                      "--method", "sqrt-bucket")
    a, b = rec1["result"]["measured_T"], rec2["result"]["measured_T"]
    assert a == pytest.approx(b, rel=1e-9)


def test_missing_flag_exit_2(capsys):
    assert main(["count", "--p", "7", "--n", "1"]) == 2
    assert main(["expsum", "--p", "7", "--n", "3"]) == 2
    capsys.readouterr()


def test_expsum_both_modes(capsys, schema):
    code, rec = run_cli(
        capsys, "expsum", "--p", "7", "--n", "4", "--k1", "3", "--k2", "4",
        "--x3", "1", "--mode", "both",
    )
    assert code == 0
    jsonschema.validate(rec, schema)
    assert rec["result"]["oracle_diff"] <= rec["result"]["tolerance"]
    assert rec["result"]["bruteforce"]["abs"] == pytest.approx(97.99161109, abs=1e-6)


def test_expsum_vanishing(capsys):
    code, rec = run_cli(
        capsys, "expsum", "--p", "7", "--n", "3", "--k1", "1", "--k2", "2", "--x3", "1",
    )
    assert code == 0
    assert rec["result"]["closed"]["abs"] == 0
    assert rec["result"]["bruteforce"]["abs"] <= 1e-7


def test_expsum_alpha_record(capsys, schema):
    code, rec = run_cli(
        capsys, "expsum", "--p", "7", "--n", "4", "--k1", "3", "--k2", "4",
        "--x3", "1", "--alpha", "5", "--mode", "both",
    )
    assert code == 0
    jsonschema.validate(rec, schema)
    assert rec["result"]["bruteforce"]["abs"] == pytest.approx(49.0, abs=1e-6)


def test_expsum_hypothesis_violation_is_structured(capsys, schema):
    code, rec = run_cli(
        capsys, "expsum", "--p", "7", "--n", "3", "--k1", "49", "--k2", "98",
        "--x3", "1", "--mode", "closed",
    )
    assert code == 0  # refusal is an expected outcome, not a crash
    jsonschema.validate(rec, schema)
    assert rec["result"]["error"]["type"] == "HypothesisViolated"


def test_scan_csv(capsys, schema, tmp_path):
    out = tmp_path / "sweep.csv"
    code, rec = run_cli(
        capsys, "scan", "--p", "7", "--n", "1..3", "--nu", "0.7", "--out", str(out),
    )
    assert code == 0
    jsonschema.validate(rec, schema)
    assert len(rec["result"]["rows"]) == 3
    with out.open(newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == SWEEP_COLUMNS
    assert len(rows) == 4
    assert [r[1] for r in rows[1:]] == ["1", "2", "3"]
    # N = ceil(q^0.7) per row
    assert int(float(rows[1][3])) == math_ceil_pow(7, 1, 0.7)
    assert int(float(rows[3][3])) == math_ceil_pow(7, 3, 0.7)
    sidecar = json.loads((tmp_path / "sweep.csv.manifest.json").read_text())
    assert sidecar["subcommand"] == "scan"
    assert sidecar["params"]["p"] == 7


def math_ceil_pow(p, n, nu):
    import math

    return math.ceil((p**n) ** nu)


def test_scan_requires_target(capsys):
    assert main(["scan", "--p", "7", "--n", "1..2"]) == 2
    capsys.readouterr()


def test_scan_empty_range_exit_2(capsys):
    assert main(["scan", "--p", "7", "--n", "3..1", "--nu", "0.7"]) == 2
    capsys.readouterr()


def test_scan_n_range_with_N_range(capsys):
    code, rec = run_cli(
        capsys, "scan", "--p", "7", "--n", "2", "--N-range", "5..15:5",
    )
    assert code == 0
    assert [row["N"] for row in rec["result"]["rows"]] == [5.0, 10.0, 15.0]


def test_determinism_across_reruns(capsys):
    _, rec1 = run_cli(capsys, "count", "--p", "7", "--n", "2", "--N", "12")
    _, rec2 = run_cli(capsys, "count", "--p", "7", "--n", "2", "--N", "12")
    assert strip_volatile(rec1) == strip_volatile(rec2)
    _, rec3 = run_cli(capsys, "count", "--p", "7", "--n", "2", "--N", "12",
                      "--threads", "4")
    r3 = strip_volatile(rec3)
    r3["manifest"]["params"]["threads"] = None
    assert r3 == strip_volatile(rec1)


def test_out_dir_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("PYTHMOD_OUT_DIR", str(tmp_path))
    code, rec = run_cli(capsys, "gauss", "--q", "9", "--out", "gauss.json")
    assert code == 0
    assert (tmp_path / "gauss.json").exists()
    assert rec["manifest"]["out"] == str(tmp_path / "gauss.json")
