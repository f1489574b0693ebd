"""Unit tests for the command-line front end."""

import csv
import io
import json

import pytest

from wlandelay.cli import (
    EXIT_CONFIG,
    EXIT_CONVERGENCE,
    EXIT_OK,
    EXIT_UNSTABLE,
    build_parser,
    build_spec,
    exit_code,
    main,
    resolve_config,
)
from wlandelay.config import settings
from wlandelay.core.exceptions import InstabilityError, ReplicationError
from wlandelay.schemas.experiment import Command

QUICK_SIM = ["--reps", "2", "--horizon", "10", "--warmup", "1"]


def parse_output(text: str) -> tuple[list[str], list[dict[str, str]]]:
    """Split CSV output into comment lines and data records."""
    comments = [line for line in text.splitlines() if line.startswith("#")]
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return comments, list(csv.DictReader(io.StringIO(body)))


class TestSpecResolution:
    """Tests for merging flags, config values and settings."""

    def test_defaults_from_settings(self):
        """Verify unset run controls fall back to settings."""
        args = build_parser().parse_args(["fixed-point"])
        spec = build_spec(args, resolve_config(args))

        assert spec.command is Command.FIXED_POINT
        assert spec.seed == settings.DEFAULT_SEED
        assert spec.reps == settings.DEFAULT_REPS
        assert spec.horizon == settings.DEFAULT_HORIZON

    def test_flag_beats_config_beats_settings(self, tmp_path):
        """Verify precedence of run controls."""
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"simulation": {"seed": 5, "reps": 4}}))
        args = build_parser().parse_args(["throughput", "--config", str(path), "--reps", "9"])
        spec = build_spec(args, resolve_config(args))

        assert spec.reps == 9
        assert spec.seed == 5
        assert spec.warmup == settings.DEFAULT_WARMUP

    def test_rate_list_parsing(self):
        """Verify comma-separated rates become a tuple."""
        args = build_parser().parse_args(["analytic-delay", "--lambda", "10, 20,30.5"])
        assert args.lambdas == (10.0, 20.0, 30.5)

    def test_bad_choice_exits(self):
        """Verify argparse rejects unknown tables."""
        with pytest.raises(SystemExit) as exc_info:
            build_parser().parse_args(["table", "--table", "9"])
        assert exc_info.value.code == 2

    def test_capacity_flags_exclusive(self):
        """Verify --c-override and --use-computed-c cannot be combined."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(
                ["analytic-delay", "--lambda", "10", "--c-override", "70", "--use-computed-c"]
            )


class TestExitCodes:
    """Tests for error to exit status mapping."""

    def test_replication_errors_unwrapped(self):
        """Verify a failed replication maps by its cause."""
        assert exit_code(ReplicationError(3, InstabilityError("overload"))) == EXIT_UNSTABLE

    def test_unknown_errors(self):
        """Verify unexpected errors map to 1."""
        assert exit_code(RuntimeError("boom")) == 1


class TestCommands:
    """Tests for running commands end to end."""

    def test_throughput_to_stdout(self, capsys):
        """Verify the S(n) curve is written with its header comments."""
        assert main(["throughput", "--n-min", "2", "--n-max", "5"]) == EXIT_OK
        out = capsys.readouterr().out
        comments, records = parse_output(out)

        assert len(out.splitlines()) == len(comments) + 1 + 4
        assert comments[0].startswith("# wlandelay ")
        assert "# command=throughput" in comments
        assert any(line.startswith("# config_hash=") for line in comments)
        assert [int(r["n"]) for r in records] == [2, 3, 4, 5]
        assert float(records[1]["throughput_pps"]) == pytest.approx(73.16, abs=0.1)

    def test_fixed_point(self, capsys):
        """Verify the fixed point row."""
        assert main(["fixed-point", "--n", "3"]) == EXIT_OK
        _, records = parse_output(capsys.readouterr().out)

        assert float(records[0]["p"]) == pytest.approx(0.10456, abs=5e-4)

    def test_analytic_delay(self, capsys):
        """Verify the zero-switchover delay of the symmetric table row."""
        assert main(["analytic-delay", "--lambda", "10,10,10"]) == EXIT_OK
        comments, records = parse_output(capsys.readouterr().out)

        assert len(records) == 3
        assert all(float(r["mean_delay_ms"]) == pytest.approx(18.66, abs=0.01) for r in records)
        assert "# capacity=72.5" in comments

    def test_analytic_delay_with_switchover(self, capsys):
        """Verify a tiny switchover takes the general path to nearly the same value."""
        assert main(["analytic-delay", "--lambda", "10,10,10", "--epsilon", "1e-9"]) == EXIT_OK
        _, records = parse_output(capsys.readouterr().out)

        assert float(records[0]["mean_delay_ms"]) == pytest.approx(18.66, abs=0.01)
        assert float(records[0]["p_nonempty"]) > 0

    def test_sim_dcf_saturated(self, capsys):
        """Verify saturated DCF runs report estimates in the header."""
        assert main(["sim-dcf", "--saturated", "--n", "3", *QUICK_SIM]) == EXIT_OK
        comments, records = parse_output(capsys.readouterr().out)

        assert len(records) == 3
        assert records[0]["mean_delay_s"] == "nan"
        assert any(line.startswith("# p_hat=") for line in comments)

    def test_table_rows(self, capsys):
        """Verify a reproduced table has one line per row and node."""
        assert main(["table", "--table", "2", *QUICK_SIM]) == EXIT_OK
        _, records = parse_output(capsys.readouterr().out)

        assert len(records) == 15
        assert records[0]["published_analytic_ms"] == "18.7"

    def test_sweep_n(self, capsys):
        """Verify the node sweep writes one line per n."""
        assert main(["sweep-n", "--lambda", "5", "--n-grid", "2,3", *QUICK_SIM]) == EXIT_OK
        _, records = parse_output(capsys.readouterr().out)

        assert [r["n"] for r in records] == ["2", "3"]
        assert all(r["stable"] == "true" for r in records)

    def test_output_file_is_deterministic(self, tmp_path):
        """Verify equal seeds write byte-identical files."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sim-polling", "--lambda", "10,20", "--seed", "42", *QUICK_SIM]

        assert main([*args, "--out", str(first)]) == EXIT_OK
        assert main([*args, "--out", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()
        assert "# seed=42" in first.read_text().splitlines()

    def test_polling_from_config(self, tmp_path, capsys):
        """Verify the polling section feeds analytic-delay when no rates are given."""
        path = tmp_path / "cell.json"
        path.write_text(
            json.dumps(
                {
                    "polling": {
                        "lambdas": [10.0],
                        "gamma": [1.0],
                        "service_mean": [0.01],
                        "service_m2": [0.0001],
                        "switch_mean": [0.01],
                        "switch_m2": [0.0001],
                    }
                }
            )
        )

        assert main(["analytic-delay", "--config", str(path)]) == EXIT_OK
        _, records = parse_output(capsys.readouterr().out)

        assert float(records[0]["mean_delay_s"]) == pytest.approx(0.0175, rel=1e-9)


class TestFailures:
    """Tests for failing runs."""

    def test_overload(self):
        """Verify rho >= 1 exits with 3."""
        assert main(["analytic-delay", "--lambda", "40,40"]) == EXIT_UNSTABLE

    def test_missing_config(self, tmp_path):
        """Verify a missing config file exits with 2."""
        assert main(["fixed-point", "--config", str(tmp_path / "absent.json")]) == EXIT_CONFIG

    def test_bad_override(self):
        """Verify an invalid override exits with 2."""
        assert main(["fixed-point", "--set", "cw_min_W=1"]) == EXIT_CONFIG

    def test_missing_rates(self):
        """Verify commands needing rates exit with 2 without them."""
        assert main(["analytic-delay"]) == EXIT_CONFIG

    def test_horizon_not_after_warmup(self):
        """Verify an empty measurement window exits with 2."""
        assert main(["sim-dcf", "--lambda", "5,5", "--horizon", "1", "--warmup", "2"]) == EXIT_CONFIG

    def test_solver_iteration_cap(self, monkeypatch):
        """Verify a solver that runs out of iterations exits with 4."""
        monkeypatch.setattr(settings, "SOLVER_MAX_ITER", 2)
        assert main(["fixed-point", "--n", "3"]) == EXIT_CONVERGENCE

    def test_unwritable_output(self, tmp_path):
        """Verify an unwritable output path exits nonzero."""
        target = tmp_path / "missing-dir" / "out.csv"
        assert main(["throughput", "--n-max", "3", "--out", str(target)]) == 1
