"""HTTP endpoints, validation failures, error mapping, remote client parity."""

from __future__ import annotations

import math

import httpx
import pytest
from fastapi.testclient import TestClient

import mzx.runner
from mzx import __version__
from mzx.client import LocalClient, RemoteClient, ServiceError
from mzx.core import ConsistencyError
from mzx.models import RunRequest, RunResponse, VerifyRequest
from mzx.runner import render_csv, run_experiment
from mzx.service import app


@pytest.fixture()
def tc():
    with TestClient(app) as client:
        yield client


def sample_request() -> RunRequest:
    return RunRequest(
        preparation="entangled",
        phi=[0.0, 1.4],
        alpha={"start": 0.0, "stop": math.pi / 2.0, "steps": 3},  # type: ignore[arg-type]
        mode="both",
        shots=2500,
        seed=11,
    )


def test_health_reports_name_and_version(tc):
    body = tc.get("/health").json()
    assert body == {"name": "mzx", "version": __version__}


def test_run_endpoint_returns_rows_and_summary(tc):
    response = tc.post("/run", json=sample_request().model_dump(mode="json"))
    assert response.status_code == 200
    body = response.json()
    assert len(body["rows"]) == 6
    assert body["summary"]["rows"] == 6
    assert body["summary"]["max_sum_rule_residual"] <= 1e-12
    first = body["rows"][0]
    assert first["seed"] == 11
    assert first["est_whole_mean"] is not None


def test_run_endpoint_is_deterministic(tc):
    payload = sample_request().model_dump(mode="json")
    assert tc.post("/run", json=payload).json() == tc.post("/run", json=payload).json()


@pytest.mark.parametrize(
    "payload",
    [
        {"preparation": "product", "phi": [0], "alpha": [0], "mode": "both"},  # no shots
        {"preparation": "muon", "phi": [0], "alpha": [0]},
        {"preparation": "product", "phi": [], "alpha": [0]},
        {"preparation": "product", "phi": [0], "alpha": [0], "seed": -1},
        {"preparation": "product", "phi": [0], "alpha": [0], "bogus": 1},
        {"preparation": "product", "phi": ["many"], "alpha": [0]},
    ],
)
def test_run_endpoint_rejects_invalid_requests(tc, payload):
    assert tc.post("/run", json=payload).status_code == 422


def test_verify_endpoint_runs_all_checks(tc):
    response = tc.post("/verify", json={"shots": 4000, "seed": 1})
    assert response.status_code == 200
    body = response.json()
    assert body["passed"] is True
    assert [check["criterion"] for check in body["checks"]] == list(range(1, 12))
    assert all(check["passed"] for check in body["checks"])


def test_consistency_errors_map_to_500_with_marker(tc, monkeypatch):
    def boom(request):
        raise ConsistencyError("sum rule broken")

    monkeypatch.setattr(mzx.runner, "run_experiment", boom)
    response = tc.post("/run", json=sample_request().model_dump(mode="json"))
    assert response.status_code == 500
    assert response.json() == {
        "detail": "sum rule broken",
        "error_type": "consistency",
    }


def app_transport(tc: TestClient) -> httpx.MockTransport:
    """Route a sync httpx client's requests into the ASGI app under test."""

    def handler(request: httpx.Request) -> httpx.Response:
        response = tc.request(
            request.method,
            request.url.path,
            content=request.content,
            headers=dict(request.headers),
        )
        return httpx.Response(response.status_code, content=response.content)

    return httpx.MockTransport(handler)


def test_remote_client_matches_local_byte_for_byte(tc):
    request = sample_request()
    local = LocalClient().run(request)
    with RemoteClient("http://service", transport=app_transport(tc)) as remote:
        over_http = remote.run(request)
    assert isinstance(over_http, RunResponse)
    assert render_csv(over_http) == render_csv(local)
    assert render_csv(local) == render_csv(run_experiment(request))


def test_remote_client_verify_and_error_mapping(tc, monkeypatch):
    with RemoteClient("http://service", transport=app_transport(tc)) as remote:
        report = remote.verify(VerifyRequest(shots=2000, seed=4))
        assert report.passed and len(report.checks) == 11

    def boom(request):
        raise ConsistencyError("broken")

    monkeypatch.setattr(mzx.runner, "run_experiment", boom)
    with RemoteClient("http://service", transport=app_transport(tc)) as remote:
        with pytest.raises(ConsistencyError):
            remote.run(sample_request())


def test_remote_client_raises_service_error_when_unreachable():
    def refuse(request: httpx.Request) -> httpx.Response:
        raise httpx.ConnectError("connection refused", request=request)

    with RemoteClient("http://down", transport=httpx.MockTransport(refuse)) as remote:
        with pytest.raises(ServiceError):
            remote.verify()
