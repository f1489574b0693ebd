"""Experiment descriptions and result rows."""

from enum import Enum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, model_validator

from wlandelay.schemas.dcf import DcfParams
from wlandelay.schemas.polling import PollingConfig
from wlandelay.schemas.simulation import Distribution, PollingMode


class Command(str, Enum):
    """Experiments the command line can run."""

    FIXED_POINT = "fixed-point"
    THROUGHPUT = "throughput"
    ANALYTIC_DELAY = "analytic-delay"
    SIM_POLLING = "sim-polling"
    SIM_DCF = "sim-dcf"
    TABLE = "table"
    SWEEP_LAMBDA = "sweep-lambda"
    SWEEP_N = "sweep-n"


class ExperimentSpec(BaseModel):
    """One fully resolved command-line run.

    Unset optional fields fall back to the config file, then to ``Settings``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    config_path: Path | None = None
    overrides: tuple[str, ...] = ()
    seed: int = Field(..., ge=0)
    reps: int = Field(..., ge=1)
    output_path: Path | None = None

    table: int | None = Field(default=None, ge=1, le=4)
    n: int | None = Field(default=None, ge=1)
    n_min: int = Field(default=2, ge=2)
    n_max: int = Field(default=30, ge=2)
    n_grid: tuple[int, ...] | None = None
    lambdas: tuple[float, ...] | None = None
    c_override: float | None = Field(default=None, gt=0)
    use_computed_c: bool = False
    horizon: float = Field(..., gt=0)
    warmup: float = Field(..., ge=0)
    epsilon: float = Field(default=0.0, ge=0)
    mode: PollingMode | None = None
    service_dist: Distribution = Distribution.DETERMINISTIC
    switch_dist: Distribution = Distribution.DETERMINISTIC
    saturated: bool = False
    workers: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def check_command_inputs(self) -> "ExperimentSpec":
        """Each command carries the inputs it needs."""
        if self.config_path is not None and not self.config_path.is_file():
            raise ValueError(f"config file {self.config_path} does not exist")
        if self.horizon <= self.warmup:
            raise ValueError("horizon must exceed warmup")
        if self.command is Command.TABLE and self.table is None:
            raise ValueError("table command needs --table")
        if self.n_min > self.n_max:
            raise ValueError(f"n_min={self.n_min} exceeds n_max={self.n_max}")
        if self.lambdas is not None and any(not lam > 0 for lam in self.lambdas):
            raise ValueError("arrival rates must be > 0")
        if self.n_grid is not None and any(k < 2 for k in self.n_grid):
            raise ValueError("every n in the grid must be >= 2")
        if self.c_override is not None and self.use_computed_c:
            raise ValueError("--c-override and --use-computed-c are exclusive")
        return self


class ComparisonRow(BaseModel):
    """One row of a published delay table next to its reproduction (delays in ms)."""

    row: int
    lambdas: list[float]
    rho: float
    stable: bool
    analytic_ms: float | None = None  # None when rho >= 1
    analytic_cn_ms: float | None = None
    published_analytic_ms: float
    published_sim_ms: list[float]
    sim_ms: list[float] | None = None
    ci_ms: list[float] | None = None


class TableResult(BaseModel):
    """A reproduced delay table."""

    table_id: int
    n: int
    capacity: float
    computed_capacity: float
    rows: list[ComparisonRow]
    reps: int | None = None
    seed: int | None = None


class SweepRow(BaseModel):
    """One grid point of a delay sweep (delays in ms, NaN when unstable)."""

    n: int
    lambda_per_node: float
    capacity: float
    stable: bool
    analytic_ms: float
    sim_ms: float
    ci_ms: float


class SimulationSection(BaseModel):
    """Run controls read from a config file."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int | None = Field(default=None, ge=0)
    reps: int | None = Field(default=None, ge=1)
    horizon: float | None = Field(default=None, gt=0)
    warmup: float | None = Field(default=None, ge=0)


class ConfigFile(BaseModel):
    """Parsed config file: DCF parameters, an optional polling system and run controls."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    dcf: DcfParams = Field(default_factory=DcfParams)
    polling: PollingConfig | None = None
    simulation: SimulationSection = Field(default_factory=SimulationSection)
