"""HTTP session service."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from thermocount.metrics import aggregate
from thermocount.pipeline import EstimateRecord
from thermocount.service.app import create_app


@pytest.fixture()
def client():
    return TestClient(create_app())


def _frame_payload(shift, h=24, w=40, ground_truth=None):
    pixels = np.full((h, w), 0.15)
    pixels[8:16, shift : shift + 8] = 0.9
    body = {"pixels": pixels.tolist(), "timestamp_s": float(shift)}
    if ground_truth is not None:
        body["ground_truth"] = ground_truth
    return body


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok", "sessions": 0}


def test_session_lifecycle(client):
    r = client.post("/sessions", json={"params": {"noise_low": 4, "noise_high": 500,
                                                  "lighting_threshold": 0.5}})
    assert r.status_code == 201
    body = r.json()
    sid = body["session_id"]
    assert body["frames_seen"] == 0
    assert body["params"]["noise_low"] == 4

    for i, shift in enumerate((0, 6, 12, 18)):
        r = client.post(f"/sessions/{sid}/frames", json=_frame_payload(shift, ground_truth=1))
        assert r.status_code == 200
        est = r.json()
        assert est["frame_index"] == i
        if i == 0:
            assert est["raw_count"] == 0  # first frame self-masks
        else:
            assert est["raw_count"] >= 1
        assert est["confidence"] is not None

    assert client.get(f"/sessions/{sid}").json()["frames_seen"] == 4
    assert client.delete(f"/sessions/{sid}").status_code == 204
    assert client.get(f"/sessions/{sid}").status_code == 404
    assert client.delete(f"/sessions/{sid}").status_code == 404


def test_unknown_session_and_bad_frames(client):
    assert client.post("/sessions/nope/frames", json=_frame_payload(0)).status_code == 404

    sid = client.post("/sessions", json={}).json()["session_id"]
    r = client.post(f"/sessions/{sid}/frames", json={"pixels": [[0.5, 1.7]]})
    assert r.status_code == 422  # intensity out of range

    client.post(f"/sessions/{sid}/frames", json=_frame_payload(0))
    r = client.post(f"/sessions/{sid}/frames", json={"pixels": [[0.5, 0.5]]})
    assert r.status_code == 422  # shape changed mid-session


def test_default_params_echoed(client):
    body = client.post("/sessions", json={}).json()
    assert body["params"]["k"] == 2
    assert body["params"]["noise_high"] is None  # unbounded by default


def test_metrics_endpoint_matches_library(client):
    records = [
        {"frame_index": 0, "final_count": 2, "ground_truth": 2},
        {"frame_index": 1, "final_count": 3, "ground_truth": 2},
        {"frame_index": 2, "final_count": 0, "ground_truth": 0},
    ]
    r = client.post("/metrics", json={"records": records})
    assert r.status_code == 200
    expected = aggregate([
        EstimateRecord(0, 0, 2, ground_truth=2),
        EstimateRecord(1, 0, 3, ground_truth=2),
        EstimateRecord(2, 0, 0, ground_truth=0),
    ])
    assert r.json() == expected


def test_metrics_endpoint_rejects_empty(client):
    assert client.post("/metrics", json={"records": []}).status_code == 422
