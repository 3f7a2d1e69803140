import httpx
from fastapi.testclient import TestClient

from app.main import app
from tests.conftest import AssertionHelpers

# Test client
client = TestClient(app)

SMALL_EXPERIMENT = {
    "nx": 2,
    "ny": 2,
    "snr_grid": [0, 10],
    "num_trials": 2,
    "schemes": ["heuristic", "fully_digital"],
}


def test_run_experiment():
    """Test a small experiment over HTTP."""
    response = client.post("/api/v1/experiments", json=SMALL_EXPERIMENT)
    assert response.status_code == 200
    data = response.json()
    assert data["metadata"]["master_seed"] == 0
    assert [(row["sweep_value"], row["scheme"]) for row in data["rows"]] == [
        ("0", "heuristic"), ("0", "fully_digital"), ("10", "heuristic"), ("10", "fully_digital"),
    ]


def test_trial_cap():
    """Test that HTTP runs are limited to HBF_API_MAX_TRIALS trials."""
    response = client.post("/api/v1/experiments", json={**SMALL_EXPERIMENT, "num_trials": 21})
    assert response.status_code == 400
    AssertionHelpers.assert_error_response(response, "num_trials is limited to 20")


def test_invalid_experiment():
    """Test 422 for an invalid configuration."""
    response = client.post("/api/v1/experiments", json={**SMALL_EXPERIMENT, "schemes": []})
    assert response.status_code == 422


class TestPresetsRoute:
    """Test the presets listing."""

    async def test_list_presets(self, async_client: httpx.AsyncClient):
        """Test that every named preset is returned."""
        response = await async_client.get("/api/v1/presets")
        assert response.status_code == 200
        data = response.json()
        assert {"desk", "large", "bits", "users", "antennas"} <= set(data)
        assert data["large"]["nx"] == 6
