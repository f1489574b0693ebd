"""Polling system delay endpoints."""

import math

from fastapi import APIRouter

from wlandelay.api.deps import http_error
from wlandelay.core.exceptions import WlanDelayError
from wlandelay.schemas.polling import DelayReport, PollingConfig
from wlandelay.schemas.requests import ZeroSwitchoverRequest, ZeroSwitchoverResponse
from wlandelay.services import polling_model

router = APIRouter()


@router.post(
    "/zero-switchover",
    response_model=ZeroSwitchoverResponse,
    summary="Closed-form zero-switchover delay",
)
async def zero_switchover(body: ZeroSwitchoverRequest) -> ZeroSwitchoverResponse:
    """Mean delay (2 - rho) / (2C(1 - rho)) for the given rates and capacity."""
    try:
        delay = polling_model.mean_delay_zero_switchover(body.lambdas, body.capacity)
    except WlanDelayError as e:
        raise http_error(e) from e
    return ZeroSwitchoverResponse(
        rho=math.fsum(body.lambdas) / body.capacity,
        mean_delay_s=delay,
        mean_delay_ms=delay * 1e3,
    )


@router.post("/delay-report", response_model=DelayReport, summary="General polling delay")
async def delay_report(body: PollingConfig) -> DelayReport:
    """Per-queue mean delay, queue length and non-empty probability."""
    try:
        return polling_model.delay_report(body)
    except WlanDelayError as e:
        raise http_error(e) from e
