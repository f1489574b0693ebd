"""Reproduction of the published delay tables and the delay sweeps.

Every experiment pairs the slot-level DCF simulator with the zero-switchover
polling delay. Delays in the returned rows are in milliseconds.
"""

import logging
import math
from typing import NamedTuple

from wlandelay.config import settings
from wlandelay.core.exceptions import DomainError
from wlandelay.schemas.dcf import DcfParams
from wlandelay.schemas.experiment import ComparisonRow, SweepRow, TableResult
from wlandelay.schemas.simulation import DcfSimConfig, TrafficMode
from wlandelay.services.dcf_model import aggregate_throughput
from wlandelay.services.polling_model import mean_delay_zero_switchover
from wlandelay.sim.dcf import replicate_dcf

logger = logging.getLogger(__name__)

MS = 1e3


class PublishedRow(NamedTuple):
    """Arrival rates with the published simulated and analytic delays (ms)."""

    lambdas: tuple[float, ...]
    sim_ms: tuple[float, ...]
    analytic_ms: float


class PublishedTable(NamedTuple):
    """A published table: n nodes, nominal aggregate rate and its rows."""

    n: int
    nominal_rate: float
    rows: tuple[PublishedRow, ...]


# 1500-byte payloads at 1 Mbps. Table 2 row 5 repeats table 1 row 4 (aggregate 60.8).
PUBLISHED_TABLES: dict[int, PublishedTable] = {
    1: PublishedTable(
        n=3,
        nominal_rate=60.0,
        rows=(
            PublishedRow((10.0, 30.3, 20.0), (42.4, 42.6, 42.1), 47.9),
            PublishedRow((20.0, 20.0, 20.0), (43.9, 45.5, 43.5), 46.9),
            PublishedRow((2.0, 29.4, 29.4), (42.6, 40.5, 43.5), 49.7),
            PublishedRow((1.0, 1.0, 58.8), (34.6, 35.9, 34.9), 49.7),
        ),
    ),
    2: PublishedTable(
        n=3,
        nominal_rate=30.0,
        rows=(
            PublishedRow((10.0, 10.0, 10.0), (18.8, 18.4, 18.3), 18.7),
            PublishedRow((5.0, 10.0, 14.9), (18.5, 18.4, 18.3), 18.6),
            PublishedRow((1.0, 1.0, 27.8), (18.9, 18.5, 18.3), 18.6),
            PublishedRow((5.0, 12.5, 12.5), (18.5, 18.3, 18.2), 18.6),
            PublishedRow((1.0, 1.0, 58.8), (34.6, 35.9, 34.9), 49.7),
        ),
    ),
    3: PublishedTable(
        n=4,
        nominal_rate=60.0,
        rows=(
            PublishedRow((14.9, 14.9, 14.9, 14.9), (44.1, 43.9, 44.1, 43.3), 45.9),
            PublishedRow((1.0, 19.6, 19.6, 19.6), (41.7, 42.7, 41.5, 42.7), 46.3),
            PublishedRow((7.5, 12.5, 17.5, 22.2), (42.1, 42.0, 41.3, 41.2), 46.2),
            PublishedRow((1.5, 1.5, 1.5, 55.5), (30.5, 32.7, 32.2, 32.4), 46.8),
        ),
    ),
    4: PublishedTable(
        n=4,
        nominal_rate=30.0,
        rows=(
            PublishedRow((7.5, 7.5, 7.5, 7.5), (18.9, 18.7, 18.5, 18.3), 18.6),
            PublishedRow((3.7, 6.3, 8.7, 11.1), (18.7, 18.5, 18.5, 18.4), 18.6),
            PublishedRow((0.5, 9.8, 9.8, 9.8), (19.1, 18.8, 19.3, 18.9), 18.6),
            PublishedRow((0.5, 0.5, 0.5, 27.8), (20.7, 20.3, 20.6, 20.4), 18.5),
        ),
    ),
}


def published_table(table_id: int) -> PublishedTable:
    """Look up a published table by id (1-4)."""
    try:
        return PUBLISHED_TABLES[table_id]
    except KeyError:
        raise DomainError(f"unknown table {table_id}, expected one of 1-4") from None


def _delay_ms(lambdas: tuple[float, ...] | list[float], capacity: float) -> float | None:
    """Zero-switchover delay in ms, None at or over capacity."""
    if math.fsum(lambdas) >= capacity:
        return None
    return mean_delay_zero_switchover(lambdas, capacity) * MS


def _table_capacities(
    table: PublishedTable,
    c_override: float | None,
    use_computed_c: bool,
    params: DcfParams | None,
) -> tuple[float, float]:
    computed = aggregate_throughput(table.n, params)
    if use_computed_c:
        return computed, computed
    return (c_override if c_override is not None else settings.DEFAULT_CAPACITY), computed


def _comparison_row(
    index: int, published: PublishedRow, capacity: float, computed: float
) -> ComparisonRow:
    rho = math.fsum(published.lambdas) / capacity
    stable = rho < 1.0
    if not stable:
        logger.warning(f"Row {index}: rho={rho:.4f} >= 1, analytic delay undefined")
    return ComparisonRow(
        row=index,
        lambdas=list(published.lambdas),
        rho=rho,
        stable=stable,
        analytic_ms=_delay_ms(published.lambdas, capacity),
        analytic_cn_ms=_delay_ms(published.lambdas, computed),
        published_analytic_ms=published.analytic_ms,
        published_sim_ms=list(published.sim_ms),
    )


def analytic_table(
    table_id: int,
    capacity: float | None = None,
    use_computed_c: bool = False,
    params: DcfParams | None = None,
) -> TableResult:
    """Analytic columns of a published table, without simulation."""
    table = published_table(table_id)
    capacity, computed = _table_capacities(table, capacity, use_computed_c, params)
    rows = [
        _comparison_row(index, published, capacity, computed)
        for index, published in enumerate(table.rows, start=1)
    ]
    return TableResult(
        table_id=table_id, n=table.n, capacity=capacity, computed_capacity=computed, rows=rows
    )


def run_table(
    table_id: int,
    c_override: float | None = None,
    reps: int | None = None,
    seed: int | None = None,
    horizon: float | None = None,
    warmup: float | None = None,
    params: DcfParams | None = None,
    use_computed_c: bool = False,
    max_workers: int | None = None,
) -> TableResult:
    """Simulate every row of a published table and set it beside the analytic delay.

    Rows are reproduced by their arrival rates. All rows share the master seed.
    """
    reps = settings.DEFAULT_REPS if reps is None else reps
    seed = settings.DEFAULT_SEED if seed is None else seed
    horizon = settings.DEFAULT_HORIZON if horizon is None else horizon
    warmup = settings.DEFAULT_WARMUP if warmup is None else warmup
    params = params or DcfParams()

    result = analytic_table(table_id, c_override, use_computed_c, params)
    logger.info(
        f"Table {table_id}: {len(result.rows)} rows, n={result.n}, C={result.capacity:.4f}, "
        f"C(n)={result.computed_capacity:.4f}"
    )

    rows = []
    for row in result.rows:
        cfg = DcfSimConfig(
            n=result.n,
            params=params,
            traffic=TrafficMode.POISSON,
            lambdas=tuple(row.lambdas),
            horizon=horizon,
            warmup=warmup,
        )
        report = replicate_dcf(cfg, reps, seed, max_workers)
        ci = report.per_node_delay_ci or [math.nan] * result.n
        rows.append(
            row.model_copy(
                update={
                    "sim_ms": [d * MS for d in report.per_node_delay],
                    "ci_ms": [h * MS for h in ci],
                }
            )
        )
        logger.info(f"Table {table_id} row {row.row}: sim {rows[-1].sim_ms} ms")

    return result.model_copy(update={"rows": rows, "reps": reps, "seed": seed})


def _sweep_point(
    n: int,
    lam: float,
    capacity: float,
    params: DcfParams,
    reps: int,
    seed: int,
    horizon: float,
    warmup: float,
    max_workers: int | None,
) -> SweepRow:
    if n * lam >= capacity:
        logger.warning(
            f"Skipping n={n}, lambda={lam}: offered {n * lam:.4f} >= capacity {capacity:.4f}"
        )
        return SweepRow(
            n=n,
            lambda_per_node=lam,
            capacity=capacity,
            stable=False,
            analytic_ms=math.nan,
            sim_ms=math.nan,
            ci_ms=math.nan,
        )

    cfg = DcfSimConfig(
        n=n,
        params=params,
        traffic=TrafficMode.POISSON,
        lambdas=(lam,) * n,
        horizon=horizon,
        warmup=warmup,
    )
    report = replicate_dcf(cfg, reps, seed, max_workers)
    halfwidth = report.mean_delay_ci if report.mean_delay_ci is not None else math.nan
    return SweepRow(
        n=n,
        lambda_per_node=lam,
        capacity=capacity,
        stable=True,
        analytic_ms=mean_delay_zero_switchover([lam] * n, capacity) * MS,
        sim_ms=report.mean_delay * MS,
        ci_ms=halfwidth * MS,
    )


def delay_vs_load_sweep(
    n: int,
    lambda_grid: list[float] | tuple[float, ...],
    params: DcfParams | None = None,
    reps: int | None = None,
    seed: int | None = None,
    horizon: float | None = None,
    warmup: float | None = None,
    c_override: float | None = None,
    max_workers: int | None = None,
) -> list[SweepRow]:
    """Mean delay against the per-node rate for a symmetric n-node cell.

    The analytic column uses C = aggregate_throughput(n) unless overridden. Grid
    points with n*lambda >= C are flagged unstable and not simulated.
    """
    if n < 2:
        raise DomainError(f"sweep needs n >= 2, got {n}")
    if any(not lam > 0 for lam in lambda_grid):
        raise DomainError("arrival rates must be > 0")
    params = params or DcfParams()
    capacity = c_override if c_override is not None else aggregate_throughput(n, params)
    logger.info(f"Load sweep n={n} over {len(lambda_grid)} points, C={capacity:.4f}")
    return [
        _sweep_point(
            n,
            lam,
            capacity,
            params,
            settings.DEFAULT_REPS if reps is None else reps,
            settings.DEFAULT_SEED if seed is None else seed,
            settings.DEFAULT_HORIZON if horizon is None else horizon,
            settings.DEFAULT_WARMUP if warmup is None else warmup,
            max_workers,
        )
        for lam in lambda_grid
    ]


def delay_vs_n_sweep(
    lambda_per_node: float,
    n_grid: list[int] | tuple[int, ...],
    params: DcfParams | None = None,
    reps: int | None = None,
    seed: int | None = None,
    horizon: float | None = None,
    warmup: float | None = None,
    max_workers: int | None = None,
) -> list[SweepRow]:
    """Mean delay against the number of nodes at a fixed per-node rate, with C = C(n)."""
    if not lambda_per_node > 0:
        raise DomainError(f"arrival rate must be > 0, got {lambda_per_node}")
    if any(n < 2 for n in n_grid):
        raise DomainError("every n in the grid must be >= 2")
    params = params or DcfParams()
    logger.info(f"Node sweep lambda={lambda_per_node} over n={list(n_grid)}")
    return [
        _sweep_point(
            n,
            lambda_per_node,
            aggregate_throughput(n, params),
            params,
            settings.DEFAULT_REPS if reps is None else reps,
            settings.DEFAULT_SEED if seed is None else seed,
            settings.DEFAULT_HORIZON if horizon is None else horizon,
            settings.DEFAULT_WARMUP if warmup is None else warmup,
            max_workers,
        )
        for n in n_grid
    ]
