"""Integration tests for the table endpoint."""

import pytest
from httpx import AsyncClient

PREFIX = "/api/v1/tables"


@pytest.mark.asyncio
class TestTables:
    """Test published table endpoint."""

    async def test_table_two(self, client: AsyncClient):
        """Verify the light-load table at the default capacity."""
        response = await client.get(f"{PREFIX}/2")

        assert response.status_code == 200
        data = response.json()
        assert data["n"] == 3
        assert data["capacity"] == 72.5
        assert len(data["rows"]) == 5
        assert data["rows"][0]["analytic_ms"] == pytest.approx(18.66, abs=0.01)
        assert data["rows"][0]["sim_ms"] is None

    async def test_capacity_query(self, client: AsyncClient):
        """Verify a capacity below the load marks rows unstable."""
        response = await client.get(f"{PREFIX}/1", params={"capacity": 60})

        assert response.status_code == 200
        rows = response.json()["rows"]
        assert all(not row["stable"] for row in rows)
        assert all(row["analytic_ms"] is None for row in rows)

    async def test_computed_capacity(self, client: AsyncClient):
        """Verify the saturation throughput can serve as capacity."""
        response = await client.get(f"{PREFIX}/3", params={"use_computed_c": True})

        assert response.status_code == 200
        data = response.json()
        assert data["capacity"] == pytest.approx(data["computed_capacity"])

    async def test_unknown_table(self, client: AsyncClient):
        """Verify ids outside 1-4 fail validation."""
        response = await client.get(f"{PREFIX}/7")
        assert response.status_code == 422
