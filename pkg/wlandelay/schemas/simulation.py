"""Simulator configurations and reports."""

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from wlandelay.schemas.dcf import DcfParams
from wlandelay.schemas.polling import GAMMA_SUM_TOL, PollingConfig
from wlandelay.sim.stats import ReplicationStats

MOMENT_TOL = 1e-9

POLLING_QUEUE_METRICS = (
    "mean_sojourn",
    "mean_qlen",
    "mean_qlen_at_poll",
    "p_nonempty",
    "served",
    "served_rate",
)
POLLING_SCALAR_METRICS = ("served_rate_total", "busy_fraction")
DCF_SCALAR_METRICS = (
    "mean_delay",
    "aggregate_throughput",
    "beta_hat",
    "p_hat",
    "idle_slots",
    "success_slots",
    "collision_slots",
    "elapsed",
)


class PollingMode(str, Enum):
    """Server behaviour of the polling simulator."""

    LEE = "lee"
    ZERO_SWITCHOVER = "zero_switchover"


class Distribution(str, Enum):
    """Shape of service or switchover times."""

    DETERMINISTIC = "deterministic"
    EXPONENTIAL = "exponential"

    def second_moment(self, mean: float) -> float:
        """Second moment implied by this shape for the given mean."""
        factor = 1.0 if self is Distribution.DETERMINISTIC else 2.0
        return factor * mean * mean


class TrafficMode(str, Enum):
    """Arrival model of the DCF simulator."""

    SATURATED = "saturated"
    POISSON = "poisson"


def _mean_or_nan(stats: ReplicationStats) -> float:
    return stats.mean if stats.count else math.nan


def _moments_match(dist: Distribution, means: tuple[float, ...], m2s: tuple[float, ...]) -> bool:
    return all(
        math.isclose(m2, dist.second_moment(m), rel_tol=MOMENT_TOL, abs_tol=1e-300)
        for m, m2 in zip(means, m2s, strict=True)
    )


class PollingSimConfig(BaseModel):
    """Polling simulator run description."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    base: PollingConfig
    mode: PollingMode = PollingMode.ZERO_SWITCHOVER
    service_dist: Distribution = Distribution.DETERMINISTIC
    switch_dist: Distribution = Distribution.DETERMINISTIC
    horizon: float = Field(..., gt=0)
    warmup: float = Field(default=0.0, ge=0)

    @model_validator(mode="after")
    def check_run(self) -> "PollingSimConfig":
        """Check window, mode and moment consistency."""
        if self.horizon <= self.warmup:
            raise ValueError("horizon must exceed warmup")
        if self.mode is PollingMode.ZERO_SWITCHOVER and any(s != 0 for s in self.base.switch_mean):
            raise ValueError("zero_switchover mode needs all switchover means equal to 0")
        if self.mode is PollingMode.ZERO_SWITCHOVER and any(
            abs(g - 1.0 / self.base.n) > GAMMA_SUM_TOL for g in self.base.gamma
        ):
            raise ValueError("zero_switchover mode picks non-empty queues uniformly, gamma must be 1/n")
        if self.mode is PollingMode.LEE and any(not s > 0 for s in self.base.switch_mean):
            raise ValueError("lee mode needs strictly positive switchover means")
        if not _moments_match(self.service_dist, self.base.service_mean, self.base.service_m2):
            raise ValueError(f"service second moments inconsistent with {self.service_dist.value}")
        if self.mode is PollingMode.LEE and not _moments_match(
            self.switch_dist, self.base.switch_mean, self.base.switch_m2
        ):
            raise ValueError(f"switchover second moments inconsistent with {self.switch_dist.value}")
        return self


class PollingSimReport(BaseModel):
    """Per-queue polling simulator output.

    ``p_nonempty`` is the fraction of polls that found the queue non-empty in Lee
    mode and the fraction of time it was non-empty in zero-switchover mode.
    ``*_ci`` fields hold 95% halfwidths and are only set for replicated reports.
    """

    mean_sojourn: list[float]
    mean_qlen: list[float]
    mean_qlen_at_poll: list[float]
    p_nonempty: list[float]
    served: list[float]
    served_rate: list[float]
    served_rate_total: float
    busy_fraction: float
    mean_sojourn_ci: list[float] | None = None
    mean_qlen_ci: list[float] | None = None
    p_nonempty_ci: list[float] | None = None
    served_rate_ci: list[float] | None = None
    busy_fraction_ci: float | None = None
    reps: int = 1
    seed: int | None = None

    def metrics(self) -> dict[str, float]:
        """Flat metric mapping used to aggregate replications."""
        flat = {
            f"{name}_{i}": value
            for name in POLLING_QUEUE_METRICS
            for i, value in enumerate(getattr(self, name))
        }
        flat.update({name: getattr(self, name) for name in POLLING_SCALAR_METRICS})
        return flat

    @classmethod
    def from_replications(
        cls, aggregate: dict[str, ReplicationStats], n: int, reps: int, seed: int
    ) -> "PollingSimReport":
        """Mean report with confidence halfwidths from replication statistics."""

        def means(name: str) -> list[float]:
            return [_mean_or_nan(aggregate[f"{name}_{i}"]) for i in range(n)]

        def halfwidths(name: str) -> list[float]:
            return [aggregate[f"{name}_{i}"].halfwidth_or_nan() for i in range(n)]

        return cls(
            **{name: means(name) for name in POLLING_QUEUE_METRICS},
            served_rate_total=aggregate["served_rate_total"].mean,
            busy_fraction=aggregate["busy_fraction"].mean,
            mean_sojourn_ci=halfwidths("mean_sojourn"),
            mean_qlen_ci=halfwidths("mean_qlen"),
            p_nonempty_ci=halfwidths("p_nonempty"),
            served_rate_ci=halfwidths("served_rate"),
            busy_fraction_ci=aggregate["busy_fraction"].halfwidth_or_nan(),
            reps=reps,
            seed=seed,
        )


class DcfSimConfig(BaseModel):
    """DCF simulator run description."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=2)
    params: DcfParams = Field(default_factory=DcfParams)
    traffic: TrafficMode = TrafficMode.POISSON
    lambdas: tuple[float, ...] | None = None
    horizon: float = Field(..., gt=0)
    warmup: float = Field(default=0.0, ge=0)

    @model_validator(mode="after")
    def check_traffic(self) -> "DcfSimConfig":
        """Poisson traffic needs one positive rate per node."""
        if self.horizon <= self.warmup:
            raise ValueError("horizon must exceed warmup")
        if self.traffic is TrafficMode.POISSON:
            if self.lambdas is None or len(self.lambdas) != self.n:
                raise ValueError(f"poisson traffic needs {self.n} arrival rates")
            if any(not lam > 0 for lam in self.lambdas):
                raise ValueError("all arrival rates must be > 0")
        return self


class DcfSimReport(BaseModel):
    """Per-node DCF simulator output (delays in seconds, rates in pkts/s).

    ``mean_delay`` averages over every delivered packet of every node. Delays are
    NaN in saturated mode. Slot counts cover the post-warmup window.
    """

    per_node_delay: list[float]
    per_node_throughput: list[float]
    mean_delay: float
    aggregate_throughput: float
    beta_hat: float = Field(..., ge=0, le=1)
    p_hat: float = Field(..., ge=0, le=1)
    idle_slots: float
    success_slots: float
    collision_slots: float
    elapsed: float
    per_node_delay_ci: list[float] | None = None
    per_node_throughput_ci: list[float] | None = None
    mean_delay_ci: float | None = None
    aggregate_throughput_ci: float | None = None
    beta_hat_ci: float | None = None
    p_hat_ci: float | None = None
    reps: int = 1
    seed: int | None = None

    @property
    def total_slots(self) -> float:
        """Idle, success and collision slots together."""
        return self.idle_slots + self.success_slots + self.collision_slots

    def slot_frequencies(self) -> tuple[float, float, float]:
        """Measured (idle, success, collision) slot fractions."""
        total = self.total_slots
        if not total:
            return math.nan, math.nan, math.nan
        return self.idle_slots / total, self.success_slots / total, self.collision_slots / total

    def metrics(self) -> dict[str, float]:
        """Flat metric mapping used to aggregate replications."""
        flat: dict[str, float] = {}
        for i, (delay, rate) in enumerate(
            zip(self.per_node_delay, self.per_node_throughput, strict=True)
        ):
            flat[f"delay_{i}"] = delay
            flat[f"throughput_{i}"] = rate
        flat.update({name: getattr(self, name) for name in DCF_SCALAR_METRICS})
        return flat

    @classmethod
    def from_replications(
        cls, aggregate: dict[str, ReplicationStats], n: int, reps: int, seed: int
    ) -> "DcfSimReport":
        """Mean report with confidence halfwidths from replication statistics."""
        return cls(
            per_node_delay=[_mean_or_nan(aggregate[f"delay_{i}"]) for i in range(n)],
            per_node_throughput=[aggregate[f"throughput_{i}"].mean for i in range(n)],
            **{name: _mean_or_nan(aggregate[name]) for name in DCF_SCALAR_METRICS},
            per_node_delay_ci=[aggregate[f"delay_{i}"].halfwidth_or_nan() for i in range(n)],
            per_node_throughput_ci=[
                aggregate[f"throughput_{i}"].halfwidth_or_nan() for i in range(n)
            ],
            mean_delay_ci=aggregate["mean_delay"].halfwidth_or_nan(),
            aggregate_throughput_ci=aggregate["aggregate_throughput"].halfwidth_or_nan(),
            beta_hat_ci=aggregate["beta_hat"].halfwidth_or_nan(),
            p_hat_ci=aggregate["p_hat"].halfwidth_or_nan(),
            reps=reps,
            seed=seed,
        )
