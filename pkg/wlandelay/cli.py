"""Command-line front end.

Usage: ``wlandelay <command> [options]``; results go to ``--out`` or stdout as
CSV, logs go to stderr. Exit codes: 0 success, 1 other failure, 2 bad
configuration or arguments, 3 load at or over capacity, 4 solver did not
converge.
"""

import argparse
import logging
from collections.abc import Callable, Sequence
from pathlib import Path

from pydantic import ValidationError

from wlandelay import __version__
from wlandelay.config import settings
from wlandelay.core.exceptions import (
    ConfigError,
    ConvergenceError,
    DomainError,
    InstabilityError,
    ReplicationError,
    WlanDelayError,
)
from wlandelay.core.logging import configure_logging
from wlandelay.schemas.experiment import Command, ConfigFile, ExperimentSpec
from wlandelay.schemas.polling import PollingConfig
from wlandelay.schemas.simulation import (
    DcfSimConfig,
    Distribution,
    PollingMode,
    PollingSimConfig,
    TrafficMode,
)
from wlandelay.services.config_files import apply_overrides, config_hash, load_config_file
from wlandelay.services.csv_output import (
    PlotData,
    analytic_rows,
    dcf_sim_rows,
    emit_plot_data,
    fixed_point_rows,
    polling_sim_rows,
    sweep_rows,
    table_rows,
    throughput_rows,
)
from wlandelay.services.dcf_model import (
    aggregate_throughput,
    slot_model,
    solve_fixed_point,
    throughput_curve,
)
from wlandelay.services.experiments import delay_vs_load_sweep, delay_vs_n_sweep, run_table
from wlandelay.services.polling_model import delay_report, wlan_config, zero_switchover_report
from wlandelay.sim.dcf import replicate_dcf
from wlandelay.sim.polling import replicate_polling

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_UNSTABLE = 3
EXIT_CONVERGENCE = 4

DEFAULT_LAMBDA_GRID = (1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 13.0, 14.0, 14.6)
DEFAULT_N_GRID = (2, 3, 4, 5, 6, 7)
DEFAULT_SWEEP_N = 5
DEFAULT_SWEEP_LAMBDA = 10.0


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per experiment."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON or key=value config file")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a config value (section.key, bare keys address dcf)",
    )
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--reps", type=int, help="independent replications")
    common.add_argument("--out", type=Path, help="CSV output path (default: stdout)")
    common.add_argument("--horizon", type=float, help="simulated seconds per replication")
    common.add_argument("--warmup", type=float, help="discarded initial seconds")
    common.add_argument("--workers", type=int, help="replication worker processes")
    common.add_argument("--log-level", help="logging level (default from settings)")

    parser = argparse.ArgumentParser(
        prog="wlandelay",
        description="Mean delay of single-cell 802.11 DCF networks as a random polling system",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(Command.FIXED_POINT.value, parents=[common], help="solve the DCF fixed point")
    p.add_argument("--n", type=int, default=3, help="number of saturated nodes")

    p = sub.add_parser(Command.THROUGHPUT.value, parents=[common], help="saturation throughput S(n)")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=30)

    p = sub.add_parser(
        Command.ANALYTIC_DELAY.value, parents=[common], help="analytic mean delay per queue"
    )
    _add_rates(p)
    _add_capacity(p)
    p.add_argument("--epsilon", type=float, default=0.0, help="constant switchover time (s)")

    p = sub.add_parser(Command.SIM_POLLING.value, parents=[common], help="polling simulator")
    _add_rates(p)
    _add_capacity(p)
    p.add_argument("--epsilon", type=float, default=0.0, help="constant switchover time (s)")
    p.add_argument("--mode", type=PollingMode, choices=list(PollingMode))
    p.add_argument(
        "--service-dist",
        type=Distribution,
        choices=list(Distribution),
        default=Distribution.DETERMINISTIC,
    )
    p.add_argument(
        "--switch-dist",
        type=Distribution,
        choices=list(Distribution),
        default=Distribution.DETERMINISTIC,
    )

    p = sub.add_parser(Command.SIM_DCF.value, parents=[common], help="slot-level DCF simulator")
    _add_rates(p)
    p.add_argument("--n", type=int, help="number of nodes (saturated mode)")
    p.add_argument("--saturated", action="store_true", help="every node always backlogged")

    p = sub.add_parser(Command.TABLE.value, parents=[common], help="reproduce a published table")
    p.add_argument("--table", type=int, choices=(1, 2, 3, 4), required=True)
    _add_capacity(p)

    p = sub.add_parser(Command.SWEEP_LAMBDA.value, parents=[common], help="delay against lambda")
    p.add_argument("--n", type=int, default=DEFAULT_SWEEP_N)
    p.add_argument(
        "--lambda",
        dest="lambdas",
        type=_float_list,
        default=DEFAULT_LAMBDA_GRID,
        help="per-node rate grid (pkts/s, comma-separated)",
    )
    p.add_argument("--c-override", type=float, help="capacity for the analytic column (pkts/s)")

    p = sub.add_parser(Command.SWEEP_N.value, parents=[common], help="delay against n")
    p.add_argument(
        "--lambda",
        dest="lambdas",
        type=_float_list,
        default=(DEFAULT_SWEEP_LAMBDA,),
        help="per-node rate (pkts/s)",
    )
    p.add_argument("--n-grid", type=_int_list, default=DEFAULT_N_GRID)
    return parser


def _add_rates(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--lambda", dest="lambdas", type=_float_list, help="per-node rates (pkts/s, comma-separated)"
    )


def _add_capacity(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--c-override", type=float, help="capacity C (pkts/s)")
    group.add_argument(
        "--use-computed-c", action="store_true", help="use the saturation throughput C(n)"
    )


def resolve_config(args: argparse.Namespace) -> ConfigFile:
    """Config file (or defaults) with ``--set`` overrides applied."""
    config = load_config_file(args.config) if args.config else ConfigFile()
    return apply_overrides(config, args.overrides)


def build_spec(args: argparse.Namespace, config: ConfigFile) -> ExperimentSpec:
    """Resolve flags, config values and settings into one ExperimentSpec."""
    sim = config.simulation

    def pick(flag: object, from_file: object, default: object) -> object:
        if flag is not None:
            return flag
        return from_file if from_file is not None else default

    fields = {
        "command": Command(args.command),
        "config_path": args.config,
        "overrides": tuple(args.overrides),
        "seed": pick(args.seed, sim.seed, settings.DEFAULT_SEED),
        "reps": pick(args.reps, sim.reps, settings.DEFAULT_REPS),
        "output_path": args.out,
        "horizon": pick(args.horizon, sim.horizon, settings.DEFAULT_HORIZON),
        "warmup": pick(args.warmup, sim.warmup, settings.DEFAULT_WARMUP),
    }
    for name in (
        "table",
        "n",
        "n_min",
        "n_max",
        "n_grid",
        "lambdas",
        "c_override",
        "use_computed_c",
        "epsilon",
        "mode",
        "service_dist",
        "switch_dist",
        "saturated",
        "workers",
    ):
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = value
    return ExperimentSpec.model_validate(fields)


def _capacity(spec: ExperimentSpec, config: ConfigFile, n: int) -> float:
    if spec.use_computed_c:
        return aggregate_throughput(n, config.dcf)
    return spec.c_override if spec.c_override is not None else settings.DEFAULT_CAPACITY


def _required_lambdas(spec: ExperimentSpec, config: ConfigFile) -> tuple[float, ...]:
    if spec.lambdas:
        return spec.lambdas
    if config.polling is not None:
        return config.polling.lambdas
    raise ConfigError(f"{spec.command.value} needs --lambda or a 'polling' config section")


def _run_fixed_point(spec: ExperimentSpec, config: ConfigFile) -> PlotData:
    n = spec.n if spec.n is not None else 3
    solution = solve_fixed_point(n, config.dcf)
    return fixed_point_rows(solution, slot_model(n, config.dcf))


def _run_throughput(spec: ExperimentSpec, config: ConfigFile) -> PlotData:
    return throughput_rows(throughput_curve(spec.n_min, spec.n_max, config.dcf))


def _run_analytic_delay(spec: ExperimentSpec, config: ConfigFile) -> PlotData:
    if spec.lambdas is None and config.polling is not None:
        return analytic_rows(config.polling.lambdas, delay_report(config.polling))
    lambdas = _required_lambdas(spec, config)
    capacity = _capacity(spec, config, len(lambdas))
    if spec.epsilon > 0:
        report = delay_report(wlan_config(lambdas, capacity, spec.epsilon))
    else:
        report = zero_switchover_report(lambdas, capacity)
    return analytic_rows(lambdas, report, capacity)


def _polling_base(spec: ExperimentSpec, config: ConfigFile) -> PollingConfig:
    if spec.lambdas is None and config.polling is not None:
        return config.polling
    lambdas = _required_lambdas(spec, config)
    base = wlan_config(lambdas, _capacity(spec, config, len(lambdas)), spec.epsilon)
    data = base.model_dump()
    data["service_m2"] = tuple(spec.service_dist.second_moment(m) for m in base.service_mean)
    data["switch_m2"] = tuple(spec.switch_dist.second_moment(s) for s in base.switch_mean)
    return PollingConfig.model_validate(data)


def _run_sim_polling(spec: ExperimentSpec, config: ConfigFile) -> PlotData:
    base = _polling_base(spec, config)
    mode = spec.mode
    if mode is None:
        mode = PollingMode.LEE if base.s > 0 else PollingMode.ZERO_SWITCHOVER
    cfg = PollingSimConfig(
        base=base,
        mode=mode,
        service_dist=spec.service_dist,
        switch_dist=spec.switch_dist,
        horizon=spec.horizon,
        warmup=spec.warmup,
    )
    report = replicate_polling(cfg, spec.reps, spec.seed, spec.workers)
    return polling_sim_rows(base.lambdas, report)


def _run_sim_dcf(spec: ExperimentSpec, config: ConfigFile) -> PlotData:
    if spec.saturated:
        n = spec.n if spec.n is not None else (len(spec.lambdas) if spec.lambdas else 0)
        cfg = DcfSimConfig(
            n=n,
            params=config.dcf,
            traffic=TrafficMode.SATURATED,
            horizon=spec.horizon,
            warmup=spec.warmup,
        )
        lambdas = None
    else:
        lambdas = _required_lambdas(spec, config)
        cfg = DcfSimConfig(
            n=len(lambdas),
            params=config.dcf,
            traffic=TrafficMode.POISSON,
            lambdas=lambdas,
            horizon=spec.horizon,
            warmup=spec.warmup,
        )
    report = replicate_dcf(cfg, spec.reps, spec.seed, spec.workers)
    return dcf_sim_rows(lambdas, report)


def _run_table(spec: ExperimentSpec, config: ConfigFile) -> PlotData:
    assert spec.table is not None
    result = run_table(
        spec.table,
        c_override=spec.c_override,
        reps=spec.reps,
        seed=spec.seed,
        horizon=spec.horizon,
        warmup=spec.warmup,
        params=config.dcf,
        use_computed_c=spec.use_computed_c,
        max_workers=spec.workers,
    )
    return table_rows(result)


def _run_sweep_lambda(spec: ExperimentSpec, config: ConfigFile) -> PlotData:
    rows = delay_vs_load_sweep(
        spec.n if spec.n is not None else DEFAULT_SWEEP_N,
        _required_lambdas(spec, config),
        params=config.dcf,
        reps=spec.reps,
        seed=spec.seed,
        horizon=spec.horizon,
        warmup=spec.warmup,
        c_override=spec.c_override,
        max_workers=spec.workers,
    )
    return sweep_rows(rows)


def _run_sweep_n(spec: ExperimentSpec, config: ConfigFile) -> PlotData:
    lambdas = _required_lambdas(spec, config)
    if len(lambdas) != 1:
        raise ConfigError("sweep-n takes a single per-node rate")
    rows = delay_vs_n_sweep(
        lambdas[0],
        spec.n_grid or DEFAULT_N_GRID,
        params=config.dcf,
        reps=spec.reps,
        seed=spec.seed,
        horizon=spec.horizon,
        warmup=spec.warmup,
        max_workers=spec.workers,
    )
    return sweep_rows(rows, by_n=True)


RUNNERS: dict[Command, Callable[[ExperimentSpec, ConfigFile], PlotData]] = {
    Command.FIXED_POINT: _run_fixed_point,
    Command.THROUGHPUT: _run_throughput,
    Command.ANALYTIC_DELAY: _run_analytic_delay,
    Command.SIM_POLLING: _run_sim_polling,
    Command.SIM_DCF: _run_sim_dcf,
    Command.TABLE: _run_table,
    Command.SWEEP_LAMBDA: _run_sweep_lambda,
    Command.SWEEP_N: _run_sweep_n,
}


def run_experiment(spec: ExperimentSpec, config: ConfigFile) -> PlotData:
    """Run one experiment and return its CSV rows."""
    logger.info(f"Running {spec.command.value} (seed={spec.seed}, reps={spec.reps})")
    return RUNNERS[spec.command](spec, config)


def exit_code(error: BaseException) -> int:
    """Process exit status for an error raised by an experiment."""
    if isinstance(error, ReplicationError):
        return exit_code(error.cause)
    if isinstance(error, ConvergenceError):
        return EXIT_CONVERGENCE
    if isinstance(error, InstabilityError):
        return EXIT_UNSTABLE
    if isinstance(error, ConfigError | DomainError | ValidationError):
        return EXIT_CONFIG
    return EXIT_FAILURE


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``wlandelay`` command."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or settings.LOG_LEVEL)

    try:
        config = resolve_config(args)
        spec = build_spec(args, config)
        plot = run_experiment(spec, config)
        emit_plot_data(spec, plot, config_hash(config))
    except (WlanDelayError, ValidationError) as e:
        code = exit_code(e)
        logger.error(f"{type(e).__name__}: {e}")
        return code
    return EXIT_OK
