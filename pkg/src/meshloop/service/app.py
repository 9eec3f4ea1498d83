"""HTTP facade over SessionManager.

Endpoints (all JSON bodies carry schema_version):

- POST   /sessions                      multipart OBJ upload -> new session
- GET    /sessions/{id}                 session state snapshot
- GET    /sessions/{id}/iterations/{k}  variants + meshes (202 while computing)
- POST   /sessions/{id}/ratings         four ratings 0-5
- POST   /sessions/{id}/terminate       reason: satisfied | reset
- GET    /export                        JSONL of terminated sessions

Build an app with create_app(manager); the CLI wires config from
flags/environment.
"""
from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, File, Form, UploadFile
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel, Field

from ..mesh.core import MeshError
from ..mesh.obj_io import ObjParseError
from .manager import (
    IterationNotFound,
    IterationPending,
    PayloadTooLarge,
    SessionManager,
    SessionNotFound,
    WrongState,
)
from .records import SCHEMA_VERSION


class RatingsBody(BaseModel):
    schema_version: int = SCHEMA_VERSION
    ratings: list[int] = Field(min_length=4, max_length=4)


class TerminateBody(BaseModel):
    schema_version: int = SCHEMA_VERSION
    reason: str


def create_app(manager: SessionManager) -> FastAPI:
    app = FastAPI(title="meshloop service")
    app.state.manager = manager

    @app.exception_handler(SessionNotFound)
    async def _session_not_found(request, exc):
        return JSONResponse(status_code=404,
                            content={"detail": f"unknown session {exc.args[0]!r}"})

    @app.exception_handler(IterationNotFound)
    async def _iteration_not_found(request, exc):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(IterationPending)
    async def _iteration_pending(request, exc):
        return JSONResponse(status_code=202,
                            content={"status": "pending", "detail": str(exc)},
                            headers={"Retry-After": "1"})

    @app.exception_handler(WrongState)
    async def _wrong_state(request, exc):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(PayloadTooLarge)
    async def _too_large(request, exc):
        return JSONResponse(status_code=413, content={"detail": str(exc)})

    @app.exception_handler(ObjParseError)
    async def _parse_error(request, exc):
        detail = {"detail": f"mesh rejected: {exc}"}
        if getattr(exc, "line_no", None) is not None:
            detail["line"] = exc.line_no
        return JSONResponse(status_code=400, content=detail)

    @app.exception_handler(MeshError)
    async def _mesh_error(request, exc):
        return JSONResponse(status_code=400,
                            content={"detail": f"mesh rejected: {exc}"})

    @app.exception_handler(ValueError)
    async def _value_error(request, exc):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.post("/sessions", status_code=201)
    async def create_session(mesh: UploadFile = File(...),
                             seed: int = Form(0),
                             max_iterations: Optional[int] = Form(None),
                             mesh_label: str = Form("")):
        payload = await mesh.read()
        label = mesh_label or (mesh.filename or "mesh").rsplit(".", 1)[0]
        info = manager.create_session(payload, seed=seed,
                                      max_iterations=max_iterations,
                                      mesh_label=label)
        return {"schema_version": SCHEMA_VERSION, **info}

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        return {"schema_version": SCHEMA_VERSION,
                **manager.get_session(session_id)}

    @app.get("/sessions/{session_id}/iterations/{index}")
    async def get_iteration(session_id: str, index: int):
        record, original_obj, variant_objs = manager.get_iteration(session_id,
                                                                   index)
        body = record.to_json_dict()
        for variant, obj_text in zip(body["variants"], variant_objs):
            variant["mesh"] = obj_text
        return {
            "schema_version": SCHEMA_VERSION,
            "session_id": session_id,
            "original_mesh": original_obj,
            **body,
        }

    @app.post("/sessions/{session_id}/ratings")
    async def submit_ratings(session_id: str, body: RatingsBody):
        state = manager.submit_ratings(session_id, body.ratings)
        return {"schema_version": SCHEMA_VERSION,
                "session_id": session_id, "state": state}

    @app.post("/sessions/{session_id}/terminate")
    async def terminate(session_id: str, body: TerminateBody):
        state = manager.terminate(session_id, body.reason)
        return {"schema_version": SCHEMA_VERSION,
                "session_id": session_id, "state": state}

    @app.get("/export")
    async def export():
        def lines():
            for line in manager.export_sequences():
                yield line + "\n"
        return StreamingResponse(lines(), media_type="application/x-ndjson")

    return app
