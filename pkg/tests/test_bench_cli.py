"""Tests for bench runs and the command-line interface."""

import json

import mpmath
import pytest

from bench.__main__ import main, resolve_config
from bench.reference import load_reference
from bench.runner import (EXIT_CONFIG, EXIT_MISMATCH, EXIT_NUMERICAL, EXIT_OK, RunOptions, bench_legendre,
                          exit_code_for, run_case, run_convergence, run_table, seed_oracles)
from common.errors import ConfigError
from precision.context import PrecisionContext
from special.legendre import LegendreStrategy
from validation.schema import BenchCase, ReportRow
from validation.writer import read_csv

SMALL_CASE = """
[case]
id = small-1s1s
orbital_a = 1 0 0 1.24
orbital_b = 1 0 0 1.5
A = 0 0 0
B = 0 0 -2
C = 0 0 -4
lmax = 4
digits = 8
"""

SINGULAR_CASES = """
[defaults]
A = 0 0 0
B = 0 0 2
orbital_a = 1 0 0 1
orbital_b = 1 0 0 1

[case]
id = on-segment
C = 0 0 1

[case]
id = coincident
B = 0 0 0
C = 0 0 1
"""

FAST_FLAGS = ["--rule-order", "7", "--format", "all"]


def _write(tmp_path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _small_case() -> BenchCase:
    return BenchCase.from_dict({"id": "small-1s1s", "orbital_a": ["1", 0, 0, "1.24"],
                                "orbital_b": ["1", 0, 0, "1.5"], "A": [0, 0, 0], "B": [0, 0, -2],
                                "C": [0, 0, -4], "l_max": 4, "target_digits": 8})


def test_exit_code_for():
    """Test exit codes by row outcome."""
    ok = ReportRow(case_id="a", label="", l_max=1, target_digits=5, computed="1.0E+00",
                   reference="1.0E+00", status="match")
    unchecked = ReportRow(case_id="b", label="", l_max=1, target_digits=5, computed="1.0E+00")
    missed = ReportRow(case_id="c", label="", l_max=1, target_digits=5, computed="1.0E+00",
                       reference="2.0E+00", status="partial")
    failed = ReportRow(case_id="d", label="", l_max=1, target_digits=5, computed=None, error="boom")
    assert exit_code_for([]) == EXIT_OK
    assert exit_code_for([ok, unchecked]) == EXIT_OK
    assert exit_code_for([ok, missed]) == EXIT_MISMATCH
    assert exit_code_for([missed, failed]) == EXIT_NUMERICAL


def test_run_options_context():
    """Test that the run digits override the case digits."""
    case = _small_case()
    assert RunOptions().context(case).target_digits == 8
    assert RunOptions(digits=12, guard_digits=11).context(case) == PrecisionContext(12, 11)


def test_run_case_without_reference():
    """Test evaluating a small case with no reference value."""
    row = run_case(_small_case(), RunOptions(rule_order=7))
    assert row.error is None
    assert row.status is None
    assert row.regions > 0
    assert row.extra["evaluations"] > 0
    value = mpmath.mpf(row.computed)
    assert value > 0


def test_run_case_records_geometry_errors():
    """Test that numerical errors become row errors instead of exceptions."""
    case = _small_case()
    case.C = ["0", "0", "-1"]
    case.reference_value = "1.0E+00"
    row = run_case(case, RunOptions(rule_order=7))
    assert row.computed is None
    assert row.error.startswith("SingularGeometryError")
    assert row.status == "fail"


def test_resolve_config():
    """Test bundled config names and missing files."""
    assert resolve_config("threecenter1").endswith("threecenter1.cfg")
    assert resolve_config("threecenter2.cfg").endswith("threecenter2.cfg")
    with pytest.raises(ConfigError):
        resolve_config("threecenter9")


def test_list_command(capsys):
    """Test listing the bundled reference cases."""
    assert main(["list"]) == EXIT_OK
    output = capsys.readouterr().out
    assert "threecenter1:" in output
    assert "t2-pp-2.1" in output and "(mantissa only)" in output
    assert "convergence t4-ss-2.0: l_max 1, 5, 10, 11, 12, 15, 20, 30, 40" in output
    assert "magnitude-only auxiliary rows: 8" in output


def test_missing_config_exits_with_config_error(capsys):
    """Test exit code 2 for a missing configuration."""
    assert main(["table", "--config", "/nonexistent/table.cfg"]) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_malformed_config_exits_with_config_error(tmp_path, capsys):
    """Test exit code 2 and the file location for a malformed configuration."""
    path = _write(tmp_path, "bad.cfg", "[case]\nid = x\nlmax = many\n")
    assert main(["table", "--config", path]) == EXIT_CONFIG
    assert f"{path}:3:" in capsys.readouterr().err


def test_unknown_case_id_exits_with_config_error(tmp_path):
    """Test exit code 2 for a --case id absent from the configuration."""
    path = _write(tmp_path, "small.cfg", SMALL_CASE)
    assert main(["table", "--config", path, "--case", "nope", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_convergence_rejects_unordered_limits():
    """Test exit code 2 for a non-ascending l_max list."""
    assert main(["convergence", "--case", "t4-ss-2.0", "--lmax", "10", "5"]) == EXIT_CONFIG
    assert main(["convergence", "--case", "no-such-case"]) == EXIT_CONFIG


def test_legendre_rejects_few_repetitions():
    """Test exit code 2 for fewer than three timing repetitions."""
    assert main(["legendre", "--xi-c", "2", "--repetitions", "2"]) == EXIT_CONFIG


def test_basic_command(capsys):
    """Test the closed-form basic integral command."""
    argv = ["basic", "--kappa", "1", "--lam", "0", "--z", "2", "--R", "1", "--digits", "15"]
    assert main(argv) == EXIT_OK
    printed = capsys.readouterr().out.strip().splitlines()[-1]
    assert "E" in printed
    assert mpmath.mpf(printed) > 0
    assert main(["basic", "--kappa", "1", "--lam", "0", "--z", "-2", "--R", "1"]) == EXIT_NUMERICAL


def test_dirac_command(capsys):
    """Test relativistic exponents and the supercritical error."""
    assert main(["dirac", "--kappa", "-1", "1", "-2", "--Z", "80", "--digits", "12"]) == EXIT_OK
    lines = [line for line in capsys.readouterr().out.splitlines() if line.startswith("kappa=")]
    assert [line.split()[0] for line in lines] == ["kappa=-1", "kappa=+1", "kappa=-2"]
    assert main(["dirac", "--kappa", "1", "--Z", "200"]) == EXIT_NUMERICAL
    assert "PrecisionDomainError" in capsys.readouterr().err


def test_empty_config_writes_reports(tmp_path):
    """Test that a config without cases still writes every report."""
    path = _write(tmp_path, "empty.cfg", "# no cases yet\n")
    out = tmp_path / "reports"
    assert main(["table", "--config", path, "--out", str(out), "--format", "all"]) == EXIT_OK
    for name in ("empty.txt", "empty.csv", "empty.jsonl", "empty.metrics.json"):
        assert (out / name).is_file()
    metrics = json.loads((out / "empty.metrics.json").read_text(encoding="utf-8"))
    assert metrics["cases"] == 0
    assert metrics["fingerprint"].startswith("empty-")


def test_wrong_reference_exits_with_mismatch(tmp_path):
    """Test exit code 1 when a case misses its reference."""
    path = _write(tmp_path, "wrong.cfg", SMALL_CASE + "reference = 9.99999E+05\nmin_digits = 5\n")
    out = tmp_path / "reports"
    assert main(["table", "--config", path, "--out", str(out)] + FAST_FLAGS) == EXIT_MISMATCH
    rows = read_csv(str(out / "wrong.csv"))
    assert rows[0].status == "fail"
    assert rows[0].matching_digits == 0


def test_reports_are_reproducible(tmp_path):
    """Test that two runs of the same configuration share value fields and fingerprint."""
    path = _write(tmp_path, "small.cfg", SMALL_CASE)
    first = run_table(path, RunOptions(rule_order=7, out_dir=str(tmp_path / "one")))
    second = run_table(path, RunOptions(rule_order=7, out_dir=str(tmp_path / "two")))
    assert first.exit_code == EXIT_OK
    assert first.fingerprint == second.fingerprint
    assert [row.value_fields() for row in first.rows] == [row.value_fields() for row in second.rows]
    assert set(first.outputs) == {"txt", "csv", "metrics"}


def test_parallel_run_keeps_order_and_reports_errors(tmp_path):
    """Test worker-process runs keep configuration order and exit 3 on numerical errors."""
    path = _write(tmp_path, "singular.cfg", SINGULAR_CASES)
    run = run_table(path, RunOptions(jobs=2, out_dir=str(tmp_path)))
    assert [row.case_id for row in run.rows] == ["on-segment", "coincident"]
    assert run.rows[0].error.startswith("SingularGeometryError")
    assert run.rows[1].error.startswith("DegenerateGeometryError")
    assert run.exit_code == EXIT_NUMERICAL
    assert main(["table", "--config", path, "--jobs", "2", "--out", str(tmp_path)]) == EXIT_NUMERICAL


def test_run_convergence_shares_one_evaluation(tmp_path):
    """Test convergence rows carry digits shared with the previous limit."""
    options = RunOptions(rule_order=7, out_dir=str(tmp_path), output_format="txt")
    run = run_convergence(_small_case(), [2, 4], options, load_reference())
    assert [row.l_max for row in run.rows] == [2, 4]
    assert run.rows[0].extra["previous_digits"] is None
    assert run.rows[1].extra["previous_digits"] >= 1
    assert run.rows[0].status is None
    assert (tmp_path / "small-1s1s.convergence.txt").read_text(encoding="utf-8").startswith("Convergence")
    with pytest.raises(ConfigError):
        run_convergence(_small_case(), [], options)


@pytest.mark.slow
def test_seed_oracles_agree_with_adaptive_route():
    """Test that fixed-rule oracles reproduce the adaptive auxiliary integrals."""
    entries = seed_oracles(PrecisionContext(12))
    assert len(entries) == 2
    for entry in entries:
        assert entry["J_digits"] >= 10
        assert entry["K_digits"] >= 10


@pytest.mark.slow
def test_bench_legendre_report(tmp_path):
    """Test that every strategy is timed and the strategies agree."""
    report = bench_legendre(3, 1, 0, "3", "2", "2.5", "1.5", "2", 3, PrecisionContext(12))
    assert sorted(report.ranking) == sorted(s.value for s in LegendreStrategy)
    assert all(len(samples) == 3 for samples in report.samples.values())
    assert "Legendre strategy timing" in report.render()


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
