import time

import pytest
from fastapi.testclient import TestClient

from tonescope.corpus import build_two_tone_demo
from tonescope.server import create_app
from tonescope.session import SessionManager


@pytest.fixture(scope="module")
def demo_files(tmp_path_factory):
    return build_two_tone_demo(str(tmp_path_factory.mktemp("srv_demo")))


@pytest.fixture
def client():
    return TestClient(create_app(SessionManager()))


def start_session(client, demo_files, **overrides):
    wav_high, _, fixture = demo_files
    body = {"source": wav_high, "transcript_fixture": fixture, "speed": 1e6}
    body.update(overrides)
    response = client.post("/session", json=body)
    assert response.status_code == 200, response.text
    return response.json()["session_id"]


def test_create_session_returns_id(client, demo_files):
    session_id = start_session(client, demo_files)
    assert isinstance(session_id, str) and session_id


def test_create_session_bad_source_400(client):
    response = client.post("/session", json={"source": "/no/such/file.wav"})
    assert response.status_code == 400


def test_create_session_bad_config_400(client, demo_files):
    wav_high, _, fixture = demo_files
    response = client.post("/session", json={"source": wav_high, "speed": 0})
    assert response.status_code == 400


def test_report_unknown_session_404(client):
    assert client.get("/session/nope/report").status_code == 404


def test_report_endpoint(client, demo_files):
    session_id = start_session(client, demo_files)
    time.sleep(1.0)  # batch-speed run finishes quickly
    report = client.get(f"/session/{session_id}/report").json()
    assert report["session_id"] == session_id
    assert report["keyword_bar"] == [{"w": "enjoy", "pol": 1}]
    assert report["state"] == "ended"


def test_stream_delivers_events_in_order(client, demo_files):
    session_id = start_session(client, demo_files, speed=50.0)
    events = []
    with client.websocket_connect(f"/session/{session_id}/stream") as ws:
        while True:
            message = ws.receive_json()
            events.append(message)
            if message["kind"] == "status" and message.get("state") == "ended":
                break
    kinds = {e["kind"] for e in events}
    assert {"prosody", "snapshot", "transcript", "keyword_bar", "status"} <= kinds
    seqs = [e["seq"] for e in events]
    assert seqs == sorted(seqs)
    prosody = next(e for e in events if e["kind"] == "prosody")
    assert set(prosody) == {"seq", "kind", "t_ms", "f0_hz", "rms", "band"}
    snapshot = next(e for e in events if e["kind"] == "snapshot")
    assert set(snapshot) == {"seq", "kind", "t_ms", "label", "polarity", "band", "discrepancy"}
    bar = next(e for e in events if e["kind"] == "keyword_bar")
    assert bar["words"] == [{"w": "enjoy", "pol": 1}]


def test_stream_suggestion_request_round_trip(client, demo_files):
    session_id = start_session(client, demo_files, speed=5.0)
    suggestion = None
    with client.websocket_connect(f"/session/{session_id}/stream") as ws:
        sent = False
        while True:
            message = ws.receive_json()
            if not sent and message["kind"] == "keyword_bar":
                ws.send_json({"type": "request_suggestion"})
                sent = True
            if message["kind"] == "suggestion":
                suggestion = message
                break
            if message["kind"] == "status" and message.get("state") == "ended":
                break
    assert suggestion is not None
    assert suggestion["source"] == "live"
    assert suggestion["text"]
    assert "latency_ms" in suggestion


def test_stream_unknown_session_closes(client):
    from starlette.websockets import WebSocketDisconnect

    with pytest.raises(WebSocketDisconnect):
        with client.websocket_connect("/session/missing/stream") as ws:
            ws.receive_json()
