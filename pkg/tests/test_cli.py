"""End-to-end tests of the command-line interface (subprocess level)."""

from __future__ import annotations

import subprocess
import sys

import pytest


def run_cli(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "qpesim", *args],
        capture_output=True,
        text=True,
        timeout=120,
    )


def csv_rows(output: str) -> list[list[str]]:
    return [line.split(",") for line in output.splitlines() if not line.startswith("#")]


class TestEstimate:
    def test_exact_qft_phase(self):
        proc = run_cli("estimate", "--algo", "qft", "--phase", "0.101b", "--bits", "3", "--seed", "1")
        assert proc.returncode == 0
        fields = dict(line.split(None, 1) for line in proc.stdout.splitlines())
        assert fields["bits"] == "101"
        assert fields["error"] == "0"
        assert fields["total_tests"] == "3"

    def test_const_trial_accounting(self):
        proc = run_cli(
            "estimate", "--algo", "const", "--degree", "3", "--phase", "0.703125",
            "--bits", "5", "--eps", "0.05", "--seed", "7",
        )
        assert proc.returncode == 0
        fields = dict(line.split(None, 1) for line in proc.stdout.splitlines())
        assert fields["total_tests"] == "133"  # 19 odd reps times 7 stages

    def test_kitaev_output_length(self):
        proc = run_cli(
            "estimate", "--algo", "kitaev", "--phase", "0.101b", "--bits", "3",
            "--eps", "0.3", "--seed", "3",
        )
        assert proc.returncode == 0
        fields = dict(line.split(None, 1) for line in proc.stdout.splitlines())
        assert len(fields["bits"]) == 5

    def test_json_has_stage_log(self):
        import json

        proc = run_cli(
            "estimate", "--algo", "qft", "--phase", "0.101b", "--bits", "3",
            "--seed", "1", "--format", "json",
        )
        payload = json.loads(proc.stdout)
        assert len(payload["stages"]) == 3
        assert payload["bits"] == "101"

    def test_kitaev_json_stage_log(self):
        import json

        proc = run_cli(
            "estimate", "--algo", "kitaev", "--phase", "0.101b", "--bits", "3",
            "--eps", "0.3", "--seed", "3", "--format", "json",
        )
        stages = json.loads(proc.stdout)["stages"]
        assert [s["stage"] for s in stages] == [1, 2, 3]
        assert all({"sin_estimate", "cos_estimate", "beta"} <= set(s) for s in stages)

    def test_random_phase_is_seeded(self):
        a = run_cli("estimate", "--algo", "qft", "--phase", "random", "--bits", "4", "--seed", "9")
        b = run_cli("estimate", "--algo", "qft", "--phase", "random", "--bits", "4", "--seed", "9")
        c = run_cli("estimate", "--algo", "qft", "--phase", "random", "--bits", "4", "--seed", "10")
        assert a.stdout == b.stdout
        assert a.stdout != c.stdout

    def test_oracle_feedback_flag(self):
        proc = run_cli(
            "estimate", "--algo", "const", "--phase", "0.703125", "--bits", "5",
            "--seed", "2", "--feedback", "oracle",
        )
        assert proc.returncode == 0


class TestUsageErrors:
    def test_degree_rejected_for_qft(self):
        proc = run_cli("estimate", "--algo", "qft", "--phase", "0.1", "--bits", "3", "--degree", "4")
        assert proc.returncode == 1
        assert "--degree" in proc.stderr

    def test_eps_rejected_for_qft(self):
        proc = run_cli("estimate", "--algo", "qft", "--phase", "0.1", "--bits", "3", "--eps", "0.1")
        assert proc.returncode == 1

    def test_aqft_requires_degree(self):
        proc = run_cli("estimate", "--algo", "aqft", "--phase", "0.1", "--bits", "3")
        assert proc.returncode == 1
        assert "--degree" in proc.stderr

    def test_unknown_algo(self):
        proc = run_cli("estimate", "--algo", "qpe", "--phase", "0.1", "--bits", "3")
        assert proc.returncode == 1

    def test_feedback_rejected_for_kitaev(self):
        proc = run_cli(
            "estimate", "--algo", "kitaev", "--phase", "0.1", "--bits", "3",
            "--feedback", "oracle",
        )
        assert proc.returncode == 1

    def test_bad_phase_literal(self):
        proc = run_cli("estimate", "--algo", "qft", "--phase", "1.25", "--bits", "3")
        assert proc.returncode == 1
        assert "error" in proc.stderr


class TestTable:
    def test_default_rows(self):
        proc = run_cli("table", "--format", "csv")
        rows = csv_rows(proc.stdout)
        assert rows[0] == ["success_prob", "eps", "kitaev_trials", "const_precision_trials"]
        budget_columns = [(row[2], row[3]) for row in rows[1:]]
        assert budget_columns == [
            ("98", "3"), ("120", "5"), ("211", "13"), ("344", "24"), ("515", "39"),
        ]

    def test_single_probability(self):
        proc = run_cli("table", "--probs", "0.5", "--format", "csv")
        assert csv_rows(proc.stdout)[1][2:] == ["98", "3"]

    def test_exact_constants(self):
        proc = run_cli("table", "--probs", "0.5", "--exact-constants", "--format", "csv")
        assert csv_rows(proc.stdout)[1][2:] == ["97", "3"]


class TestCompare:
    def test_pinned_row(self):
        proc = run_cli("compare", "--eps-list", "0.0027")
        rows = csv_rows(proc.stdout)
        assert rows[0] == ["eps", "kitaev_trials", "const_precision_trials", "ratio"]
        assert rows[1][1:3] == ["344", "24"]

    def test_default_grid_monotone(self):
        proc = run_cli("compare")
        rows = csv_rows(proc.stdout)[1:]
        assert len(rows) == 27
        kitaev = [int(row[1]) for row in rows]
        const = [int(row[2]) for row in rows]
        assert kitaev == sorted(kitaev)
        assert const == sorted(const)

    def test_ratio_column_decays(self):
        proc = run_cli("compare")
        ratios = [float(row[3]) for row in csv_rows(proc.stdout)[1:]]
        assert ratios[0] > ratios[-1]
        assert abs(ratios[-1] - 11.75) / 11.75 < 0.05


class TestMonteCarlo:
    def test_csv_deterministic(self):
        args = (
            "montecarlo", "--algo", "const", "--bits", "4", "--runs", "10",
            "--seed", "5", "--format", "csv",
        )
        assert run_cli(*args).stdout == run_cli(*args).stdout

    def test_summary_fields(self):
        proc = run_cli(
            "montecarlo", "--algo", "qft", "--bits", "3", "--runs", "25",
            "--seed", "1", "--format", "csv",
        )
        rows = csv_rows(proc.stdout)
        assert rows[0] == ["run", "phi", "success", "tests"]
        assert len(rows) == 26
        summary = proc.stdout.splitlines()[-1]
        assert summary.startswith("# summary:") and "wilson95" in summary

    def test_qft_success_rate(self):
        proc = run_cli(
            "montecarlo", "--algo", "qft", "--bits", "6", "--runs", "400",
            "--seed", "0", "--format", "csv",
        )
        rows = csv_rows(proc.stdout)[1:]
        rate = sum(int(row[2]) for row in rows) / len(rows)
        assert rate >= 0.79  # well above the 8/pi^2 worst case minus noise

    def test_fixed_phase_runs(self):
        proc = run_cli(
            "montecarlo", "--algo", "kitaev", "--bits", "3", "--runs", "5",
            "--phase", "0.101b", "--seed", "2", "--format", "csv",
        )
        rows = csv_rows(proc.stdout)[1:]
        assert all(row[1] == "0.625" for row in rows)
        assert all(row[2] == "1" for row in rows)


class TestValidate:
    def test_passes_with_reasonable_samples(self):
        proc = run_cli("validate", "--bits", "4", "--samples", "4000", "--seed", "0")
        assert proc.returncode == 0
        assert "overall" in proc.stdout and "FAIL" not in proc.stdout

    def test_undersampled_check_fails_with_code_two(self):
        # 30 samples legitimately miss the concentration limit for this seed
        proc = run_cli(
            "validate", "--bits", "1", "--samples", "30", "--phase", "0.25", "--seed", "4"
        )
        assert proc.returncode == 2
        assert "FAIL" in proc.stdout

    def test_rejects_large_register(self):
        proc = run_cli("validate", "--bits", "12")
        assert proc.returncode == 1
