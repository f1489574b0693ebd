"""Independent replications of a stochastic experiment."""

import logging
import pickle
from collections.abc import Callable, Mapping
from concurrent.futures import ProcessPoolExecutor

from wlandelay.config import settings
from wlandelay.core.exceptions import DomainError, ReplicationError
from wlandelay.sim.rng import RngStream
from wlandelay.sim.stats import ReplicationStats

logger = logging.getLogger(__name__)

Experiment = Callable[[RngStream], Mapping[str, float]]


def _run_one(experiment: Experiment, master_seed: int, index: int) -> dict[str, float]:
    """Run replication ``index`` on its own stream."""
    try:
        return dict(experiment(RngStream(master_seed, index)))
    except Exception as e:
        raise ReplicationError(index, e) from e


def _run_one_in_worker(experiment: Experiment, master_seed: int, index: int) -> dict[str, float]:
    """Like :func:`_run_one`, with a cause the parent process can unpickle."""
    try:
        return _run_one(experiment, master_seed, index)
    except ReplicationError as e:
        try:
            pickle.loads(pickle.dumps(e.cause))
        except Exception:
            raise ReplicationError(index, RuntimeError(f"{type(e.cause).__name__}: {e.cause}")) from None
        raise


def _warn_missing(aggregate: Mapping[str, ReplicationStats], reps: int) -> None:
    for name, stats in aggregate.items():
        # metrics undefined in every run (saturated delays, zero-switchover poll counts) stay quiet
        if stats.skipped and stats.count:
            logger.warning(
                f"Metric {name}: {stats.skipped} of {reps} replications gave no observation, "
                f"mean and CI use the remaining {stats.count}"
            )


def run_replications(
    experiment: Experiment,
    reps: int,
    master_seed: int,
    max_workers: int | None = None,
) -> dict[str, ReplicationStats]:
    """Run ``reps`` replications and aggregate every metric.

    Replication r uses ``RngStream(master_seed, r)``. Results are folded in
    replication order, so the aggregate does not depend on how the runs were
    scheduled. With ``max_workers > 1`` the experiment must be picklable
    (a module-level function or a ``functools.partial`` of one). Non-finite
    observations, such as a queue with no departures in the window, are left
    out of the aggregate and reported with a warning.
    """
    if reps < 1:
        raise DomainError(f"need at least one replication, got {reps}")
    max_workers = settings.MAX_WORKERS if max_workers is None else max_workers

    logger.info(f"Running {reps} replications (seed={master_seed}, workers={max_workers})")
    if max_workers > 1 and reps > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            futures = [
                pool.submit(_run_one_in_worker, experiment, master_seed, r) for r in range(reps)
            ]
            results = [future.result() for future in futures]
    else:
        results = [_run_one(experiment, master_seed, r) for r in range(reps)]

    aggregate: dict[str, ReplicationStats] = {}
    for index, metrics in enumerate(results):
        logger.debug(f"Replication {index}: {metrics}")
        for name, value in metrics.items():
            aggregate.setdefault(name, ReplicationStats()).push(value)
    _warn_missing(aggregate, reps)
    logger.info(f"Finished {reps} replications")
    return aggregate
