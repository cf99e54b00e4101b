"""HTTP/WebSocket surface for live sessions.

POST /session                 create + start a session from config JSON
GET  /session/{id}/report     current session summary
WS   /session/{id}/stream     server->client: one JSON event per message;
                              client->server: {"type": "request_suggestion"}
"""
from __future__ import annotations

import asyncio
import queue
from pathlib import Path

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .audio import SourceError
from .session import SessionConfig, SessionManager
from .transcripts import FixtureError


class SessionRequest(BaseModel):
    source: str
    transcript_fixture: str | None = None
    reference_transcript: str | None = None
    asr_kind: str | None = None
    asr_locator: str | None = None
    asr_timeout_ms: int = 5000
    suggestion_provider: str = "echo"
    lexicon_positive: str | None = None
    lexicon_negative: str | None = None
    frame_size: int = 2048
    hop_size: int = 512
    sample_rate: int = 16000
    snapshot_interval_ms: int = 2000
    speed: float = 1.0


def create_app(
    manager: SessionManager | None = None,
    dashboard_dir: str | None = None,
    session_defaults: dict | None = None,
) -> FastAPI:
    manager = manager or SessionManager()
    app = FastAPI(title="tonescope")
    app.state.manager = manager
    app.state.session_defaults = session_defaults or {}

    @app.post("/session")
    def create_session(request: SessionRequest) -> dict:
        # server-level defaults fill fields the request leaves unset
        merged = dict(app.state.session_defaults)
        merged.update(request.model_dump(exclude_unset=True))
        try:
            config = SessionConfig(**SessionRequest(**merged).model_dump())
            session = manager.create(config)
        except (ValueError, SourceError, FixtureError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"session_id": session.id}

    @app.get("/session/{session_id}/report")
    def session_report(session_id: str) -> dict:
        try:
            return manager.get(session_id).report()
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")

    @app.websocket("/session/{session_id}/stream")
    async def session_stream(ws: WebSocket, session_id: str):
        try:
            session = manager.get(session_id)
        except KeyError:
            await ws.close(code=4404)
            return
        await ws.accept()
        subscription = session.subscribe()

        async def pump_events():
            while True:
                try:
                    event = await asyncio.to_thread(subscription.get, 0.5)
                except queue.Empty:
                    continue
                if event is None:
                    return
                await ws.send_json(event.to_wire())

        async def pump_requests():
            while True:
                message = await ws.receive_json()
                if message.get("type") == "request_suggestion":
                    session.request_suggestion()

        sender = asyncio.create_task(pump_events())
        receiver = asyncio.create_task(pump_requests())
        try:
            done, pending = await asyncio.wait(
                {sender, receiver}, return_when=asyncio.FIRST_COMPLETED
            )
            for task in pending:
                task.cancel()
            for task in done:
                exc = task.exception()
                if exc is not None and not isinstance(
                    exc, (WebSocketDisconnect, asyncio.CancelledError)
                ):
                    raise exc
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            receiver.cancel()
            try:
                await ws.close()
            except RuntimeError:
                pass  # already closed

    if dashboard_dir and Path(dashboard_dir).is_dir():
        app.mount("/", StaticFiles(directory=dashboard_dir, html=True), name="dashboard")

    return app
