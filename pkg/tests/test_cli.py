import json
import math
import subprocess
import sys

import numpy as np
import pytest

from bellbound import check_dual, load_certificate, load_matrix, tensor_power
from bellbound.cli import run

REPORT_KEYS = {"command", "version", "backend", "inputs", "results"}


def invoke(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    assert REPORT_KEYS <= set(report)
    assert "seed" in report["inputs"]
    return code, report


@pytest.fixture()
def chsh_file(tmp_path, capsys):
    path = str(tmp_path / "chsh.json")
    code, _ = invoke(capsys, ["generate", "--family", "chsh", "--out", path])
    assert code == 0
    return path


@pytest.fixture()
def tensor_file(tmp_path, capsys):
    path = str(tmp_path / "r4.json")
    code, _ = invoke(
        capsys, ["generate", "--family", "tensor", "--d", "2", "--out", path]
    )
    assert code == 0
    return path


def test_generate_writes_matrix(tmp_path, capsys):
    path = str(tmp_path / "m.json")
    code, report = invoke(
        capsys, ["generate", "--family", "tensor", "--d", "3", "--out", path]
    )
    assert code == 0
    assert report["results"] == {"rows": 8, "cols": 8, "path": path}
    with open(path, "rb") as handle:
        matrix = load_matrix(handle)
    assert np.array_equal(matrix.entries, tensor_power(3).entries)


def test_classical_subcommand(tensor_file, capsys):
    code, report = invoke(capsys, ["classical", "--matrix", tensor_file])
    assert code == 0
    results = report["results"]
    assert results["bound"] == 8.0
    assert results["witness"]["value"] == 8.0
    assert sorted(map(abs, results["witness"]["s"])) == [1, 1, 1, 1]
    rows = report["reference_comparison"]
    assert rows[0]["reference"] == 8.0
    assert rows[0]["computed"] == 8.0


def test_quantum_subcommand_chsh(chsh_file, tmp_path, capsys):
    cert_path = str(tmp_path / "cert.json")
    code, report = invoke(
        capsys,
        ["quantum", "--matrix", chsh_file, "--seed", "1", "--cert-out", cert_path],
    )
    assert code == 0
    results = report["results"]
    assert results["objective"] == pytest.approx(2.8284271, abs=1e-6)
    assert results["gap"] <= 1e-6
    assert results["converged"] is True
    row = report["reference_comparison"][0]
    assert row["reference"] == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-12)
    with open(cert_path, "rb") as handle:
        cert = load_certificate(handle)
    with open(chsh_file, "rb") as handle:
        matrix = load_matrix(handle)
    assert check_dual(matrix, cert, tol=1e-8)


def test_quantum_subcommand_displays_estimate_next_to_value(tensor_file, capsys):
    code, report = invoke(
        capsys, ["quantum", "--matrix", tensor_file, "--seed", "0"]
    )
    assert code == 0
    assert report["results"]["objective"] == pytest.approx(8.0, abs=1e-6)
    row = report["reference_comparison"][0]
    assert row["reference"] == pytest.approx(4.0 * math.sqrt(10.0), abs=1e-9)
    assert row["computed"] == pytest.approx(8.0, abs=1e-6)
    assert row["abs_difference"] > 4.0


def test_expand_subcommand(chsh_file, capsys):
    code, report = invoke(capsys, ["expand", "--matrix", chsh_file])
    assert code == 0
    expr = report["results"]["expression"]
    assert expr["identity"] == 4.0
    assert expr["commutators"] == [[[0, 1], [0, 1], -1.0]]
    assert expr["anticommutators"] == []
    assert report["results"]["norm_bound"] == pytest.approx(
        2.0 * math.sqrt(2.0), abs=1e-12
    )


def test_expand_commuting_drops_commutators(tensor_file, capsys):
    code, report = invoke(
        capsys, ["expand", "--matrix", tensor_file, "--commuting"]
    )
    assert code == 0
    assert report["results"]["norm_bound"] == 8.0
    assert report["results"]["expression"]["commutators"] == []
    assert len(report["results"]["expression"]["anticommutators"]) == 12


def test_estimate_normalized(capsys):
    code, report = invoke(capsys, ["estimate", "--d", "2", "--normalized"])
    assert code == 0
    assert report["results"]["estimate"] == pytest.approx(1.5811388, abs=1e-6)
    labels = [row["label"] for row in report["reference_comparison"]]
    assert any("1.58" in str(row["reference"]) or row["reference"] == 1.58
               for row in report["reference_comparison"])
    assert any("limit" in label for label in labels)


def test_estimate_raw_bounds(capsys):
    code, report = invoke(capsys, ["estimate", "--d", "2"])
    assert code == 0
    assert report["results"]["bound"] == pytest.approx(
        4.0 * math.sqrt(10.0), abs=1e-12
    )
    code, report = invoke(capsys, ["estimate", "--d", "2", "--commuting"])
    assert code == 0
    assert report["results"]["bound"] == 8.0


def test_estimate_domain_error_exit_code(capsys):
    code = run(["estimate", "--d", "1", "--commuting"])
    captured = capsys.readouterr()
    assert code == 3
    assert "error" in captured.err


def test_realize_subcommand(chsh_file, tmp_path, capsys):
    out = str(tmp_path / "real.json")
    code, report = invoke(
        capsys, ["realize", "--matrix", chsh_file, "--seed", "0", "--out", out]
    )
    assert code == 0
    results = report["results"]
    assert results["bell_value"] == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-6)
    assert results["value_error"] <= 1e-9
    assert results["max_correlation_error"] <= 1e-10
    with open(out, encoding="utf-8") as handle:
        dump = json.load(handle)
    assert dump["hilbert_dimension"] == 2
    assert dump["sites"] == {"x": 2, "y": 2}


def test_search_and_report(tmp_path, capsys):
    ledger = str(tmp_path / "ledger.jsonl")
    code, report = invoke(
        capsys,
        ["search", "--n", "2", "--m", "2", "--iters", "40", "--seed", "3",
         "--ledger", ledger],
    )
    assert code == 0
    assert report["results"]["best"]["ratio"] >= 1.0 - 1e-9

    code, summary = invoke(capsys, ["report", "--ledger", ledger])
    assert code == 0
    assert summary["results"]["count"] >= 1
    assert summary["results"]["best"]["ratio"] == pytest.approx(
        report["results"]["best"]["ratio"]
    )


def test_identical_invocations_identical_reports(capsys):
    run(["estimate", "--d", "4", "--normalized"])
    first = capsys.readouterr().out
    run(["estimate", "--d", "4", "--normalized"])
    second = capsys.readouterr().out
    assert first == second


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        run(["no-such-command"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        run(["quantum", "--bogus-flag"])
    assert info.value.code == 2


def test_size_guard_exit_code(tmp_path, capsys):
    path = str(tmp_path / "never.json")
    code = run(["generate", "--family", "tensor", "--d", "13", "--out", path])
    captured = capsys.readouterr()
    assert code == 3
    assert "error" in captured.err


def test_missing_file_exit_code(capsys):
    code = run(["classical", "--matrix", "/nonexistent/matrix.json"])
    captured = capsys.readouterr()
    assert code == 3
    assert "error" in captured.err


def test_strict_flags_non_convergence(chsh_file, capsys):
    code, report = invoke(
        capsys,
        ["quantum", "--matrix", chsh_file, "--restarts", "1", "--max-iters", "1",
         "--tol", "1e-15", "--strict"],
    )
    assert code == 4
    assert report["results"]["converged"] is False


def test_module_entry_point(tmp_path):
    # one end-to-end process run through python -m
    result = subprocess.run(
        [sys.executable, "-m", "bellbound", "estimate", "--d", "2", "--normalized"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert result.returncode == 0
    report = json.loads(result.stdout)
    assert report["command"] == "estimate"
    assert report["results"]["estimate"] == pytest.approx(1.5811388, abs=1e-6)
