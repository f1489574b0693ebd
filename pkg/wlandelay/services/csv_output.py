"""Plot-ready CSV output.

Each command has a fixed column layout. Files start with ``#`` comment lines
recording the version, seed and config hash, followed by one header row. Floats
are written with ``repr`` (shortest round-trip form) so identical runs produce
identical bytes.
"""

import csv
import logging
import math
import sys
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any, NamedTuple, TextIO

from wlandelay import __version__
from wlandelay.core.exceptions import OutputError
from wlandelay.schemas.dcf import FixedPointSolution, SlotModel, ThroughputPoint
from wlandelay.schemas.experiment import ExperimentSpec, SweepRow, TableResult
from wlandelay.schemas.polling import DelayReport
from wlandelay.schemas.simulation import DcfSimReport, PollingSimReport

logger = logging.getLogger(__name__)

FIXED_POINT_COLUMNS = (
    "n",
    "beta",
    "p",
    "residual",
    "iterations",
    "p_success",
    "p_idle",
    "p_collision",
    "throughput_pps",
)
THROUGHPUT_COLUMNS = ("n", "throughput_pps")
ANALYTIC_COLUMNS = (
    "queue_id",
    "lambda",
    "rho_i",
    "mean_delay_s",
    "mean_delay_ms",
    "mean_qlen",
    "p_nonempty",
)
POLLING_SIM_COLUMNS = (
    "queue_id",
    "lambda",
    "mean_sojourn_s",
    "ci_halfwidth_s",
    "mean_qlen",
    "p_nonempty",
    "mean_qlen_at_poll",
    "served_rate",
)
DCF_SIM_COLUMNS = ("node_id", "lambda", "mean_delay_s", "ci_halfwidth_s", "throughput_pps")
TABLE_COLUMNS = (
    "row",
    "node_id",
    "lambda",
    "rho",
    "stable",
    "sim_ms",
    "ci_ms",
    "analytic_ms",
    "analytic_cn_ms",
    "published_sim_ms",
    "published_analytic_ms",
)
SWEEP_LAMBDA_COLUMNS = ("lambda", "sim_ms", "ci_ms", "analytic_ms", "stable")
SWEEP_N_COLUMNS = ("n", "sim_ms", "ci_ms", "analytic_ms", "stable")


class PlotData(NamedTuple):
    """Column names, data rows and extra ``key=value`` header comments."""

    columns: tuple[str, ...]
    rows: list[tuple[Any, ...]]
    notes: dict[str, Any] = {}


def format_value(value: Any) -> str:
    """Text form of one cell."""
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def _at(values: Sequence[float] | None, i: int) -> float | None:
    return values[i] if values is not None else None


def fixed_point_rows(solution: FixedPointSolution, slots: SlotModel) -> PlotData:
    """One row with the fixed point and its slot model."""
    return PlotData(
        FIXED_POINT_COLUMNS,
        [
            (
                solution.n,
                solution.beta,
                solution.p,
                solution.residual,
                solution.iterations,
                slots.p_success,
                slots.p_idle,
                slots.p_collision,
                slots.throughput_pps,
            )
        ],
    )


def throughput_rows(points: Iterable[ThroughputPoint]) -> PlotData:
    """S(n) curve."""
    return PlotData(THROUGHPUT_COLUMNS, [(pt.n, pt.throughput_pps) for pt in points])


def analytic_rows(
    lambdas: Sequence[float], report: DelayReport, capacity: float | None = None
) -> PlotData:
    """Per-queue analytic delay."""
    rows = [
        (
            i,
            lam,
            report.rho_i[i],
            report.e_w[i],
            report.e_w[i] * 1e3,
            report.e_q[i],
            report.p_nonempty[i],
        )
        for i, lam in enumerate(lambdas)
    ]
    notes = {"rho": report.rho}
    if capacity is not None:
        notes["capacity"] = capacity
    return PlotData(ANALYTIC_COLUMNS, rows, notes)


def polling_sim_rows(lambdas: Sequence[float], report: PollingSimReport) -> PlotData:
    """Per-queue polling simulator results."""
    rows = [
        (
            i,
            lam,
            report.mean_sojourn[i],
            _at(report.mean_sojourn_ci, i),
            report.mean_qlen[i],
            report.p_nonempty[i],
            report.mean_qlen_at_poll[i],
            report.served_rate[i],
        )
        for i, lam in enumerate(lambdas)
    ]
    notes = {
        "served_rate_total": report.served_rate_total,
        "busy_fraction": report.busy_fraction,
    }
    return PlotData(POLLING_SIM_COLUMNS, rows, notes)


def dcf_sim_rows(lambdas: Sequence[float] | None, report: DcfSimReport) -> PlotData:
    """Per-node DCF simulator results; lambda is NaN in saturation."""
    rows = [
        (
            i,
            lambdas[i] if lambdas is not None else math.nan,
            report.per_node_delay[i],
            _at(report.per_node_delay_ci, i),
            report.per_node_throughput[i],
        )
        for i in range(len(report.per_node_delay))
    ]
    idle, success, collision = report.slot_frequencies()
    notes = {
        "aggregate_throughput": report.aggregate_throughput,
        "beta_hat": report.beta_hat,
        "p_hat": report.p_hat,
        "slot_idle": idle,
        "slot_success": success,
        "slot_collision": collision,
    }
    return PlotData(DCF_SIM_COLUMNS, rows, notes)


def table_rows(result: TableResult) -> PlotData:
    """One line per (row, node) of a reproduced table."""
    rows = [
        (
            row.row,
            i,
            lam,
            row.rho,
            row.stable,
            _at(row.sim_ms, i),
            _at(row.ci_ms, i),
            row.analytic_ms,
            row.analytic_cn_ms,
            row.published_sim_ms[i],
            row.published_analytic_ms,
        )
        for row in result.rows
        for i, lam in enumerate(row.lambdas)
    ]
    notes = {
        "table": result.table_id,
        "capacity": result.capacity,
        "computed_capacity": result.computed_capacity,
    }
    return PlotData(TABLE_COLUMNS, rows, notes)


def sweep_rows(rows: Iterable[SweepRow], by_n: bool = False) -> PlotData:
    """Delay sweep against lambda, or against n when ``by_n``."""
    data = [
        (row.n if by_n else row.lambda_per_node, row.sim_ms, row.ci_ms, row.analytic_ms, row.stable)
        for row in rows
    ]
    return PlotData(SWEEP_N_COLUMNS if by_n else SWEEP_LAMBDA_COLUMNS, data)


def header_lines(spec: ExperimentSpec, digest: str, notes: dict[str, Any]) -> list[str]:
    """Comment lines identifying the run."""
    lines = [
        f"# wlandelay {__version__}",
        f"# command={spec.command.value}",
        f"# seed={spec.seed}",
        f"# config_hash={digest}",
        f"# reps={spec.reps} horizon={format_value(spec.horizon)} "
        f"warmup={format_value(spec.warmup)}",
    ]
    lines.extend(f"# {key}={format_value(value)}" for key, value in notes.items())
    return lines


def write_csv(plot: PlotData, header: list[str], stream: TextIO) -> None:
    """Write comment header, column header and rows."""
    for line in header:
        stream.write(line + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(plot.columns)
    for row in plot.rows:
        writer.writerow([format_value(value) for value in row])


def emit_plot_data(spec: ExperimentSpec, plot: PlotData, digest: str) -> Path | None:
    """Write the CSV to ``spec.output_path``, or to stdout when unset."""
    header = header_lines(spec, digest, plot.notes)
    if spec.output_path is None:
        write_csv(plot, header, sys.stdout)
        return None

    path = spec.output_path
    try:
        with path.open("w", encoding="utf-8", newline="") as f:
            write_csv(plot, header, f)
    except OSError as e:
        raise OutputError(f"cannot write CSV to {path}: {e}") from e
    logger.info(f"Wrote {len(plot.rows)} rows to {path}")
    return path
