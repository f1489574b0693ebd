"""Unit tests for plot-ready CSV output."""

import io
import math

import pytest

from wlandelay.core.exceptions import OutputError
from wlandelay.schemas.experiment import Command, ExperimentSpec, SweepRow
from wlandelay.services.csv_output import (
    SWEEP_LAMBDA_COLUMNS,
    SWEEP_N_COLUMNS,
    PlotData,
    analytic_rows,
    emit_plot_data,
    format_value,
    header_lines,
    sweep_rows,
    table_rows,
    write_csv,
)
from wlandelay.services.experiments import analytic_table
from wlandelay.services.polling_model import zero_switchover_report


def make_spec(**overrides) -> ExperimentSpec:
    fields = {"command": Command.THROUGHPUT, "seed": 7, "reps": 3, "horizon": 100.0, "warmup": 5.0}
    fields.update(overrides)
    return ExperimentSpec(**fields)


class TestFormatting:
    """Tests for cell formatting."""

    @pytest.mark.parametrize(
        ("value", "text"),
        [
            (None, "nan"),
            (math.nan, "nan"),
            (True, "true"),
            (False, "false"),
            (3, "3"),
            (0.1, "0.1"),
            (1 / 3, "0.3333333333333333"),
            ("lee", "lee"),
        ],
    )
    def test_format_value(self, value, text):
        """Verify missing values, booleans and shortest round-trip floats."""
        assert format_value(value) == text

    def test_header_lines(self):
        """Verify the run is identified by version, command, seed and config hash."""
        lines = header_lines(make_spec(), "abc123", {"capacity": 72.5})

        assert lines[0].startswith("# wlandelay ")
        assert lines[1:] == [
            "# command=throughput",
            "# seed=7",
            "# config_hash=abc123",
            "# reps=3 horizon=100.0 warmup=5.0",
            "# capacity=72.5",
        ]

    def test_write_csv(self):
        """Verify comment lines, column header and rows with newline endings."""
        stream = io.StringIO()
        write_csv(PlotData(("a", "b"), [(1, 0.5), (2, None)]), ["# note"], stream)

        assert stream.getvalue() == "# note\na,b\n1,0.5\n2,nan\n"


class TestRowBuilders:
    """Tests for per-command row layouts."""

    def test_analytic_rows(self):
        """Verify one row per queue with the delay in seconds and milliseconds."""
        report = zero_switchover_report([10.0, 20.0], 72.5)
        plot = analytic_rows([10.0, 20.0], report, 72.5)

        assert len(plot.rows) == 2
        assert plot.rows[1][0] == 1
        assert plot.rows[1][4] == pytest.approx(plot.rows[1][3] * 1e3)
        assert plot.notes["capacity"] == 72.5

    def test_table_rows_without_simulation(self):
        """Verify analytic-only tables leave simulated cells empty."""
        plot = table_rows(analytic_table(3))

        assert len(plot.rows) == 16
        assert plot.rows[0][5] is None
        assert plot.notes["table"] == 3

    def test_sweep_layouts(self):
        """Verify the sweep key column follows the sweep variable."""
        rows = [
            SweepRow(
                n=5,
                lambda_per_node=2.0,
                capacity=70.0,
                stable=True,
                analytic_ms=14.8,
                sim_ms=14.1,
                ci_ms=0.2,
            )
        ]

        assert sweep_rows(rows).columns == SWEEP_LAMBDA_COLUMNS
        assert sweep_rows(rows).rows[0][0] == 2.0
        assert sweep_rows(rows, by_n=True).columns == SWEEP_N_COLUMNS
        assert sweep_rows(rows, by_n=True).rows[0][0] == 5


class TestEmit:
    """Tests for writing results."""

    def test_file(self, tmp_path):
        """Verify results land in the output path."""
        path = tmp_path / "out.csv"
        written = emit_plot_data(make_spec(output_path=path), PlotData(("n",), [(2,)]), "h")

        assert written == path
        assert path.read_text().splitlines()[-2:] == ["n", "2"]

    def test_stdout(self, capsys):
        """Verify results go to stdout without an output path."""
        assert emit_plot_data(make_spec(), PlotData(("n",), [(2,)]), "h") is None
        assert capsys.readouterr().out.endswith("n\n2\n")

    def test_unwritable(self, tmp_path):
        """Verify write failures raise OutputError."""
        spec = make_spec(output_path=tmp_path / "no-such-dir" / "out.csv")
        with pytest.raises(OutputError):
            emit_plot_data(spec, PlotData(("n",), []), "h")
