"""FastAPI service: one counting session per camera stream.

Sessions live in process memory. Frames must be posted in capture order;
each post advances the session pipeline one step and returns the raw and
smoothed occupancy for that frame. A separate stateless endpoint scores
batches of finished estimates.
"""

from __future__ import annotations

import threading
import uuid

import numpy as np
from fastapi import FastAPI, HTTPException

from ..errors import ThermoCountError
from ..frames import ThermalFrame
from ..metrics import aggregate, confidence
from ..pipeline import EstimateRecord, SessionState, init_session, step
from .schemas import (
    FrameBody,
    FrameEstimate,
    Health,
    MetricsRequest,
    MetricsResult,
    ParamsBody,
    SessionCreate,
    SessionInfo,
)


class _Session:
    def __init__(self, params):
        self.params = params
        self.state: SessionState | None = None
        self.frames_seen = 0
        self.lock = threading.Lock()  # frame posts must apply in order


def create_app() -> FastAPI:
    app = FastAPI(title="thermocount", version="0.1.0")
    sessions: dict[str, _Session] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> _Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"no session {session_id}")
        return session

    @app.get("/health", response_model=Health)
    def health() -> Health:
        with registry_lock:
            count = len(sessions)
        return Health(status="ok", sessions=count)

    @app.post("/sessions", response_model=SessionInfo, status_code=201)
    def create_session(body: SessionCreate) -> SessionInfo:
        params_body = body.params or ParamsBody()
        try:
            params = params_body.to_params()
        except ThermoCountError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        session_id = uuid.uuid4().hex[:12]
        with registry_lock:
            sessions[session_id] = _Session(params)
        return SessionInfo(session_id=session_id, frames_seen=0, params=ParamsBody.from_params(params))

    @app.get("/sessions/{session_id}", response_model=SessionInfo)
    def session_info(session_id: str) -> SessionInfo:
        session = get_session(session_id)
        return SessionInfo(
            session_id=session_id,
            frames_seen=session.frames_seen,
            params=ParamsBody.from_params(session.params),
        )

    @app.delete("/sessions/{session_id}", status_code=204)
    def close_session(session_id: str) -> None:
        with registry_lock:
            if sessions.pop(session_id, None) is None:
                raise HTTPException(status_code=404, detail=f"no session {session_id}")

    @app.post("/sessions/{session_id}/frames", response_model=FrameEstimate)
    def post_frame(session_id: str, body: FrameBody) -> FrameEstimate:
        session = get_session(session_id)
        pixels = np.asarray(body.pixels, dtype=np.float64)
        try:
            frame = ThermalFrame(pixels, timestamp_s=body.timestamp_s)
        except ThermoCountError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        with session.lock:
            index = session.frames_seen
            try:
                if session.state is None:
                    session.state = init_session(frame, session.params)
                session.state, record = step(session.state, frame, session.params, frame_index=index)
            except ThermoCountError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            session.frames_seen += 1
        score = None
        if body.ground_truth is not None and body.ground_truth >= 1:
            score = confidence(record.final_count, body.ground_truth)
        return FrameEstimate(
            session_id=session_id,
            frame_index=record.frame_index,
            raw_count=record.raw_count,
            final_count=record.final_count,
            ground_truth=body.ground_truth,
            confidence=score,
        )

    @app.post("/metrics", response_model=MetricsResult)
    def score_records(body: MetricsRequest) -> MetricsResult:
        records = [
            EstimateRecord(
                frame_index=r.frame_index,
                raw_count=r.raw_count,
                final_count=r.final_count,
                ground_truth=r.ground_truth,
            )
            for r in body.records
        ]
        try:
            return MetricsResult(**aggregate(records))
        except ThermoCountError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    return app
