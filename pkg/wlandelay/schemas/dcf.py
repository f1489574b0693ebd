"""DCF parameter and result schemas."""

from pydantic import BaseModel, ConfigDict, Field, model_validator


class DcfParams(BaseModel):
    """PHY/MAC timing and backoff parameters (durations in microseconds).

    Defaults reproduce an 802.11b DSSS cell at 1 Mbps with long preamble and
    1500-byte payloads.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    cw_min_W: int = Field(default=32, ge=2)  # noqa: N815
    max_stage_m: int = Field(default=5, ge=0)
    slot_time: float = Field(default=20.0, ge=0)
    sifs: float = Field(default=10.0, ge=0)
    difs: float = Field(default=50.0, ge=0)
    phy_header_time: float = Field(default=192.0, ge=0)
    mac_header_bits: int = Field(default=272, ge=0)
    payload_bits: int = Field(default=12000, gt=0)
    ack_bits: int = Field(default=112, ge=0)
    data_rate: float = Field(default=1e6, gt=0)  # bits/s
    propagation_delay: float = Field(default=0.0, ge=0)


class FixedPointSolution(BaseModel):
    """Attempt probability and conditional collision probability at the fixed point."""

    model_config = ConfigDict(frozen=True)

    n: int
    beta: float = Field(..., gt=0, lt=1)
    p: float = Field(..., ge=0, lt=1)
    residual: float
    iterations: int = Field(..., ge=0)


class SlotModel(BaseModel):
    """Per-slot outcome probabilities, slot durations (us) and the resulting throughput."""

    model_config = ConfigDict(frozen=True)

    n: int
    p_success: float = Field(..., ge=0, le=1)
    p_idle: float = Field(..., ge=0, le=1)
    p_collision: float = Field(..., ge=0, le=1)
    t_success: float
    t_idle: float
    t_collision: float
    throughput_pps: float = Field(..., ge=0)

    @model_validator(mode="after")
    def check_probabilities(self) -> "SlotModel":
        """Slot outcome probabilities must sum to one."""
        total = self.p_success + self.p_idle + self.p_collision
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"slot probabilities sum to {total!r}, expected 1")
        return self


class ThroughputPoint(BaseModel):
    """One row of the throughput-versus-n curve."""

    n: int
    throughput_pps: float
