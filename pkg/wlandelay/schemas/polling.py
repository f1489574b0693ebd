"""Polling system schemas."""

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

GAMMA_SUM_TOL = 1e-12
# second moments built as 1/C**2 may sit one ulp below (1/C)**2
MOMENT_REL_TOL = 1e-12


class PollingConfig(BaseModel):
    """n queues served by one 1-limited random polling server.

    Rates are in packets/s, times in seconds.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    lambdas: tuple[float, ...] = Field(..., min_length=1)
    gamma: tuple[float, ...]
    service_mean: tuple[float, ...]
    service_m2: tuple[float, ...]
    switch_mean: tuple[float, ...]
    switch_m2: tuple[float, ...]

    @model_validator(mode="after")
    def check_consistency(self) -> "PollingConfig":
        """Validate vector lengths, rates, selection probabilities and moments."""
        n = len(self.lambdas)
        for name in ("gamma", "service_mean", "service_m2", "switch_mean", "switch_m2"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} has length {len(getattr(self, name))}, expected {n}")

        if any(not lam > 0 for lam in self.lambdas):
            raise ValueError("all arrival rates must be > 0 (drop silent queues)")

        # a lone queue is always selected
        if any(not (0 < g < 1 or (n == 1 and g == 1.0)) for g in self.gamma):
            raise ValueError("selection probabilities must lie in (0, 1)")
        if abs(math.fsum(self.gamma) - 1.0) > GAMMA_SUM_TOL:
            raise ValueError(f"selection probabilities sum to {math.fsum(self.gamma)!r}")

        for mean_name, m2_name in (("service_mean", "service_m2"), ("switch_mean", "switch_m2")):
            for m, m2 in zip(getattr(self, mean_name), getattr(self, m2_name), strict=True):
                if m < 0:
                    raise ValueError(f"{mean_name} must be nonnegative")
                if m2 < m * m * (1.0 - MOMENT_REL_TOL):
                    raise ValueError(f"{m2_name} below squared {mean_name}")
        return self

    @property
    def n(self) -> int:
        """Number of queues."""
        return len(self.lambdas)

    @property
    def s(self) -> float:
        """Mean switchover time of a generic period, sum_j s_j gamma_j."""
        return math.fsum(sj * gj for sj, gj in zip(self.switch_mean, self.gamma, strict=True))


class DelayReport(BaseModel):
    """Analytic per-queue delay figures."""

    rho_i: list[float]
    rho: float
    e_w: list[float]  # seconds
    e_q: list[float]  # packets
    p_nonempty: list[float]
