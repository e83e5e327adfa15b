import json

import pytest

from staircase_pir.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_params_text(capsys):
    code, out, _ = run(capsys, "params", "--n", "4", "--k", "2", "--t", "1", "--m", "2",
                       "--q", "5")
    assert code == 0
    assert "alpha:6" in out.replace(" ", "")
    assert "block_cols: [2, 1, 3]" in out


def test_params_json_lines(capsys):
    code, out, _ = run(capsys, "--format", "json-lines", "params",
                       "--n", "3", "--k", "2", "--t", "1")
    assert code == 0
    rec = json.loads(out.strip())
    assert rec["alpha"] == 2
    assert rec["block_cols"] == [1, 1]


def test_params_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "params",
                       "--n", "3", "--k", "2", "--t", "1")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header.split(",")[:3] == ["n", "k", "t"]
    assert row.split(",")[:3] == ["3", "2", "1"]


def test_capacity_values(capsys):
    code, out, _ = run(capsys, "capacity", "--t", "1", "--k", "10", "--m", "3")
    assert code == 0
    assert "100/111" in out  # 900/999 in lowest terms
    assert "9/10" in out
    assert "999/1000" in out


def test_demo_example2(capsys):
    code, out, _ = run(capsys, "demo", "--example", "2")
    assert code == 0
    assert "rate 1/2" in out
    assert "rate 2/3" in out
    assert "rate 3/4" in out
    assert "FAILED" not in out
    assert "e'1" in out  # the grid is printed symbolically


def test_demo_example1_single_mu(capsys):
    code, out, _ = run(capsys, "demo", "--example", "1", "--mu", "2", "--i", "2")
    assert code == 0
    assert "rate 1/2" in out
    assert "rate 2/3" not in out


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--n", "4", "--k", "2", "--t", "1",
                       "--m", "2", "--trials", "2")
    assert code == 0
    assert "FAIL" not in out
    assert "pass" in out


def test_verify_exhaustive_skips_when_too_large(capsys):
    code, out, _ = run(capsys, "verify", "--n", "4", "--k", "2", "--t", "1",
                       "--m", "2", "--all", "--trials", "1")
    assert code == 0
    assert "exhaustive privacy skipped" in out


def test_simulate_csv(capsys, tmp_path):
    out_path = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "simulate", "--n", "4", "--k", "2", "--t", "1",
                       "--reps", "20", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0].startswith("config_id,strategy,target")
    assert len(lines) == 4  # header + one row per mu in [k, n]
    assert all(line.endswith("1.0") for line in lines[1:])


def test_invalid_params_exit_code(capsys):
    code, _, err = run(capsys, "params", "--n", "4", "--k", "2", "--t", "2")
    assert code == 1
    assert "error" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["params", "--n", "4"])  # missing required flags
    assert exc.value.code == 2
