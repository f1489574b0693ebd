"""Published delay tables."""

from fastapi import APIRouter, Path, Query

from wlandelay.api.deps import http_error
from wlandelay.core.exceptions import WlanDelayError
from wlandelay.schemas.experiment import TableResult
from wlandelay.services.experiments import analytic_table

router = APIRouter()


@router.get("/{table_id}", response_model=TableResult, summary="Analytic table comparison")
async def get_table(
    table_id: int = Path(..., ge=1, le=4),
    capacity: float | None = Query(None, gt=0, description="capacity C in pkts/s"),
    use_computed_c: bool = Query(False, description="use the saturation throughput C(n)"),
) -> TableResult:
    """Analytic delays of a published table beside the published values."""
    try:
        return analytic_table(table_id, capacity, use_computed_c)
    except WlanDelayError as e:
        raise http_error(e) from e
