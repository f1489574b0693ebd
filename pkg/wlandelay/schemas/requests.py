"""HTTP request and response bodies."""

from pydantic import BaseModel, Field

from wlandelay.schemas.dcf import DcfParams


class FixedPointRequest(BaseModel):
    """Fixed point for n saturated nodes."""

    n: int = Field(..., ge=2, le=1000)
    params: DcfParams = Field(default_factory=DcfParams)
    tol: float | None = Field(default=None, gt=0)


class SlotModelRequest(BaseModel):
    """Slot model for n saturated nodes."""

    n: int = Field(..., ge=2, le=1000)
    params: DcfParams = Field(default_factory=DcfParams)


class ThroughputCurveRequest(BaseModel):
    """S(n) over an inclusive range of n."""

    n_min: int = Field(default=2, ge=2)
    n_max: int = Field(default=30, ge=2, le=200)
    params: DcfParams = Field(default_factory=DcfParams)


class ZeroSwitchoverRequest(BaseModel):
    """Arrival rates (pkts/s) and capacity C (pkts/s)."""

    lambdas: list[float] = Field(..., min_length=1)
    capacity: float = Field(..., gt=0)


class ZeroSwitchoverResponse(BaseModel):
    """Zero-switchover mean delay, shared by every queue."""

    rho: float
    mean_delay_s: float
    mean_delay_ms: float
