"""API v1 router aggregation."""

from fastapi import APIRouter

from wlandelay.api.v1.dcf import router as dcf_router
from wlandelay.api.v1.polling import router as polling_router
from wlandelay.api.v1.tables import router as tables_router

api_router = APIRouter()

api_router.include_router(dcf_router, prefix="/dcf", tags=["DCF"])
api_router.include_router(polling_router, prefix="/polling", tags=["Polling"])
api_router.include_router(tables_router, prefix="/tables", tags=["Tables"])
