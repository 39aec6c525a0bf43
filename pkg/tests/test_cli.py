"""Tests for the command line front end and its exit-code contract."""

import json
import subprocess
import sys

import pytest

from fqmrep.cli import main


def test_u_prints_the_fourier_intertwiner(capsys):
    # n=1 gives the 4x4 operator for the order-4 generator (0,-1;1,0)
    assert main(["u", "--n", "1", "--p", "1", "--elem", "0,-1,1,0"]) == 0
    out = capsys.readouterr().out
    assert out.count("0.5") >= 8
    assert len(out.strip().splitlines()) == 4


def test_gamma_prints_a_matrix(capsys):
    assert main(["gamma", "--n", "1", "--m", "1", "--r", "1", "--s", "0"]) == 0
    assert "-1" in capsys.readouterr().out


def test_jrs_twisted_and_odd(capsys):
    assert main(["jrs", "--n", "1", "--r", "1", "--s", "1"]) == 0
    assert main(["jrs", "--odd-N", "3", "--r", "1", "--s", "2"]) == 0
    assert main(["jrs"]) == 2  # neither --n nor --odd-N


def test_verify_pass_exit_zero(capsys):
    assert main(["verify", "--suite", "homomorphism", "--n", "2"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["checks_run"] == 2304
    assert rep["passed"] is True
    assert "runtime_ms" not in rep


def test_verify_failure_exit_one(capsys):
    # an impossible tolerance turns float roundoff into recorded failures
    assert main(["verify", "--suite", "cocycle-odd", "--N", "3", "--tol", "1e-20"]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["passed"] is False
    assert rep["failures"]


def test_usage_errors_exit_two(capsys):
    assert main(["u", "--n", "2", "--p", "2", "--elem", "1,0,0,1"]) == 2  # even p
    assert main(["u", "--n", "1", "--elem", "1,0,0"]) == 2  # short tuple
    assert main(["verify", "--suite", "not-a-suite", "--n", "1"]) == 2
    assert main(["verify", "--n", "1"]) == 2  # --suite is required
    assert main(["verify", "--suite", "heisenberg"]) == 2  # needs a modulus
    assert main(["verify", "--suite", "heisenberg", "--n", "1", "--N", "2"]) == 2
    assert main(["export", "--format", "csv", "--kind", "u"]) == 2
    assert main([]) == 2
    capsys.readouterr()


def test_too_large_exits_two(capsys):
    assert main(["verify", "--suite", "cocycle-twisted", "--n", "6"]) == 2
    assert "exceed" in capsys.readouterr().err


def test_verify_out_file_bytes_stable(tmp_path, capsys):
    target = tmp_path / "report.json"
    args = ["verify", "--suite", "decomposition", "--n", "2",
            "--samples", "20", "--seed", "5", "--out", str(target)]
    assert main(args) == 0
    first = target.read_bytes()
    assert main(args) == 0
    assert target.read_bytes() == first
    stdout_rep = capsys.readouterr().out.strip().splitlines()[-1]
    assert first.decode().strip() == stdout_rep


def test_seed_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("FQM_SEED", "31")
    assert main(["verify", "--suite", "decomposition", "--n", "1", "--samples", "5"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["params"]["seed"] == 31
    # an explicit flag wins over the environment
    monkeypatch.setenv("FQM_SEED", "99")
    assert main(["verify", "--suite", "decomposition", "--n", "1",
                 "--samples", "5", "--seed", "4"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["params"]["seed"] == 4


def test_export_csv_header_and_cells(capsys):
    assert main(["export", "--format", "csv", "--kind", "gamma",
                 "--n", "1", "--m", "0", "--r", "1", "--s", "0"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "# dim=2 backend=exact"
    # r exponentiates the clock operator: diag(1, -1) at N=2
    assert lines[1].split(",") == ["1", "0", "0", "0"]
    assert lines[2].split(",") == ["0", "0", "-1", "0"]


def test_export_json_round_trips(capsys):
    assert main(["export", "--format", "json", "--kind", "u",
                 "--n", "1", "--elem", "0,-1,1,0"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["dim"] == 4
    assert data["backend"] == "exact"
    assert len(data["entries"]) == 4


def test_export_weil_odd_to_file(tmp_path):
    target = tmp_path / "w.csv"
    assert main(["export", "--format", "csv", "--kind", "weil-odd",
                 "--N", "3", "--elem", "0,-1,1,0", "--out", str(target)]) == 0
    text = target.read_text()
    assert text.startswith("# dim=3 backend=float")
    assert text.endswith("\n")


@pytest.mark.parametrize(
    "argv,code",
    [
        (["verify", "--suite", "metaplectic", "--n", "1"], 0),
        (["verify", "--suite", "quadratic-module", "--n", "1"], 0),
        (["weil-odd", "--N", "3", "--elem", "1,1,0,1"], 0),
        (["weil-odd", "--N", "4", "--elem", "1,1,0,1"], 2),  # even modulus
    ],
)
def test_exit_codes_in_process(argv, code, capsys):
    assert main(argv) == code
    capsys.readouterr()


def test_module_entry_point_runs():
    # the same contract holds for a real child process
    proc = subprocess.run(
        [sys.executable, "-m", "fqmrep.cli", "verify", "--suite", "metaplectic", "--n", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["checks_run"] == 8
