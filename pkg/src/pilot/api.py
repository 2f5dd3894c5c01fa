"""Console HTTP API: turns, read-only state snapshots, sensor proxy, events."""

from __future__ import annotations

import json
from typing import Any, Iterator

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from .errors import UnknownSensor
from .orchestrator import Orchestrator
from .robotsim import create_robot_app


class TurnRequest(BaseModel):
    session_id: str
    text: str


def create_console_app(orchestrator: Orchestrator) -> FastAPI:
    app = FastAPI(title="pilot-console")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/v1/ready")
    async def ready() -> dict[str, Any]:
        return orchestrator.ready()

    @app.post("/v1/turns")
    async def submit_turn(body: TurnRequest):
        if not body.text.strip():
            return JSONResponse({"error": "text must be non-empty"}, status_code=400)
        result = orchestrator.submit(body.session_id, body.text)
        return result.to_dict()

    @app.get("/v1/state/tsm/{session_id}")
    async def tsm(session_id: str) -> dict[str, Any]:
        return orchestrator.tsm_snapshot(session_id)

    @app.get("/v1/state/process-table")
    async def process_table() -> dict[str, Any]:
        return {"entries": orchestrator.process_table_snapshot()}

    @app.get("/v1/state/memory")
    async def memory() -> dict[str, Any]:
        return orchestrator.memory_snapshot()

    @app.post("/v1/sensors/{sensor_id}/trigger")
    async def trigger(sensor_id: str):
        try:
            event_id = orchestrator.trigger_sensor(sensor_id)
        except UnknownSensor as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        return {"event_id": event_id}

    @app.post("/v1/debug/kill-worker/{sensor_id}")
    async def kill_worker(sensor_id: str):
        """Fault-injection hook for tests/ops: supervision must recover it."""
        from .errors import NotBound

        try:
            orchestrator.scheduler.kill_worker(sensor_id)
        except (UnknownSensor, NotBound) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        return {"killed": sensor_id}

    @app.get("/v1/events")
    async def events() -> StreamingResponse:
        import queue as _queue

        sub = orchestrator.events.subscribe()

        def stream() -> Iterator[str]:
            try:
                while True:
                    try:
                        event = sub.get(timeout=1.0)
                    except _queue.Empty:
                        yield ": keepalive\n\n"
                        continue
                    if event is None:
                        break  # unsubscribed
                    yield f"data: {json.dumps(event)}\n\n"
            finally:
                orchestrator.events.unsubscribe(sub)

        return StreamingResponse(stream(), media_type="text/event-stream")

    # The simulated robot's own HTTP surface rides along under /api.
    if orchestrator.sim is not None:
        app.mount("", create_robot_app(orchestrator.sim))

    return app
