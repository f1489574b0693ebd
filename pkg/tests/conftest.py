"""Pytest fixtures and configuration."""

from collections.abc import AsyncGenerator

import pytest
import pytest_asyncio
from httpx import ASGITransport, AsyncClient

from wlandelay.main import app
from wlandelay.schemas.dcf import DcfParams
from wlandelay.schemas.polling import PollingConfig
from wlandelay.services.polling_model import wlan_config
from wlandelay.sim.rng import RngStream

# capacity used for the published delay tables, pkts/s
TABLE_CAPACITY = 72.5


@pytest.fixture
def default_params() -> DcfParams:
    """802.11b defaults: 1500-byte payload at 1 Mbps."""
    return DcfParams()


@pytest.fixture
def stream() -> RngStream:
    """Fresh random stream with a fixed seed."""
    return RngStream(master_seed=12345, stream_id=0)


@pytest.fixture
def symmetric_wlan() -> PollingConfig:
    """Three queues at 10 pkts/s each with zero switchover."""
    return wlan_config([10.0, 10.0, 10.0], TABLE_CAPACITY)


@pytest.fixture
def lee_two_queue() -> PollingConfig:
    """Two symmetric queues with 1 ms deterministic switchover."""
    return wlan_config([10.0, 10.0], TABLE_CAPACITY, epsilon=1e-3)


@pytest_asyncio.fixture
async def client() -> AsyncGenerator[AsyncClient, None]:
    """HTTP client bound to the application."""
    async with AsyncClient(transport=ASGITransport(app=app), base_url="http://test") as ac:
        yield ac
