"""DCF saturation model endpoints."""

from fastapi import APIRouter

from wlandelay.api.deps import http_error
from wlandelay.core.exceptions import WlanDelayError
from wlandelay.schemas.dcf import FixedPointSolution, SlotModel, ThroughputPoint
from wlandelay.schemas.requests import FixedPointRequest, SlotModelRequest, ThroughputCurveRequest
from wlandelay.services import dcf_model

router = APIRouter()


@router.post("/fixed-point", response_model=FixedPointSolution, summary="Solve the fixed point")
async def fixed_point(body: FixedPointRequest) -> FixedPointSolution:
    """Attempt and collision probabilities of n saturated nodes."""
    try:
        return dcf_model.solve_fixed_point(body.n, body.params, body.tol)
    except WlanDelayError as e:
        raise http_error(e) from e


@router.post("/slot-model", response_model=SlotModel, summary="Slot model and throughput")
async def slot_model(body: SlotModelRequest) -> SlotModel:
    """Slot outcome probabilities, durations and saturation throughput."""
    try:
        return dcf_model.slot_model(body.n, body.params)
    except WlanDelayError as e:
        raise http_error(e) from e


@router.post(
    "/throughput-curve",
    response_model=list[ThroughputPoint],
    summary="Saturation throughput against n",
)
async def throughput_curve(body: ThroughputCurveRequest) -> list[ThroughputPoint]:
    """S(n) for every n in [n_min, n_max]."""
    try:
        return dcf_model.throughput_curve(body.n_min, body.n_max, body.params)
    except WlanDelayError as e:
        raise http_error(e) from e
