"""HTTP face of the defender workflow.

Endpoints live under /v1 and return the same canonical JSON bytes the CLI
produces, so reports fetched over HTTP compare byte-for-byte with replayed
sessions. Error bodies carry the machine-readable code of the underlying
error class. Step execution is serialized per session; independent sessions
run concurrently.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import Body, FastAPI, Response

from . import workflow
from .errors import RiskcalError, UnknownDataset
from .workflow import DefenderSession, WorkflowContext, canonical_json

_STATUS = {
    "UnknownPortal": 404,
    "UnknownDataset": 404,
    "UnknownCollection": 404,
    "UnknownProfile": 404,
    "UnknownAttribute": 404,
    "UnknownSession": 404,
    "StepOutOfOrder": 409,
    "NothingToReport": 409,
    "RedactionNotAcknowledged": 403,
    "NetworkFailure": 502,
    "MalformedCatalog": 502,
}


class UnknownSession(RiskcalError):
    """Session id not present in the server store."""


def _json_response(doc, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(doc), media_type="application/json", status_code=status_code
    )


def create_app(ctx: WorkflowContext, session_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="riskcal workflow service", version="1")
    sessions: dict[str, DefenderSession] = {}
    locks: dict[str, threading.Lock] = {}
    registry_lock = threading.Lock()
    session_root = Path(session_dir) if session_dir else None
    if session_root:
        session_root.mkdir(parents=True, exist_ok=True)

    def get_session(session_id: str) -> tuple[DefenderSession, threading.Lock]:
        try:
            return sessions[session_id], locks[session_id]
        except KeyError:
            raise UnknownSession(session_id) from None

    def persist(session: DefenderSession) -> None:
        if session_root:
            workflow.save_history(session, session_root / f"{session.session_id}.history.jsonl")

    @app.exception_handler(RiskcalError)
    async def riskcal_error_handler(_request, exc: RiskcalError):
        return _json_response(
            {"error": {"code": exc.code, "message": str(exc)}},
            status_code=_STATUS.get(exc.code, 400),
        )

    @app.exception_handler(ValueError)
    async def value_error_handler(_request, exc: ValueError):
        return _json_response(
            {"error": {"code": "InvalidParameter", "message": str(exc)}}, status_code=400
        )

    @app.post("/v1/sessions")
    def create_session_endpoint():
        session = workflow.create_session(ctx)
        with registry_lock:
            sessions[session.session_id] = session
            locks[session.session_id] = threading.Lock()
        persist(session)
        return _json_response({"session_id": session.session_id}, status_code=201)

    @app.post("/v1/sessions/{session_id}/qis")
    def set_qis_endpoint(session_id: str, payload: dict = Body(...)):
        session, lock = get_session(session_id)
        with lock:
            qis = workflow.set_quasi_identifiers(session, payload.get("qis", []))
            persist(session)
        return _json_response({"selected_qis": qis})

    @app.post("/v1/sessions/{session_id}/steps/{step}")
    def run_step_endpoint(session_id: str, step: str, payload: dict = Body(default={})):
        session, lock = get_session(session_id)
        with lock:
            output = workflow.run_step(session, step, payload)
            persist(session)
        return _json_response(output)

    @app.get("/v1/sessions/{session_id}")
    def session_endpoint(session_id: str):
        session, _ = get_session(session_id)
        return _json_response(workflow.session_doc(session))

    @app.get("/v1/sessions/{session_id}/report")
    def report_endpoint(session_id: str, redact: bool = True, ack: bool = False):
        session, lock = get_session(session_id)
        with lock:
            report = workflow.export_report(session, redact=redact, acknowledged=ack)
        return _json_response(report)

    @app.get("/v1/collection")
    def collection_endpoint():
        return _json_response(
            {
                "size": len(ctx.collection),
                "datasets": [m.to_doc() for m in ctx.collection],
            }
        )

    @app.get("/v1/profiles")
    def profiles_endpoint():
        return _json_response(
            {name: list(members) for name, members in ctx.dictionary.profiles.items()}
        )

    @app.get("/v1/datasets/{dataset_ref}/risk")
    def risk_endpoint(dataset_ref: str, keys: str = "auto", threshold: int = 5):
        if ":" not in dataset_ref:
            raise UnknownDataset(dataset_ref)
        key_list = "auto" if keys == "auto" else [k for k in keys.split(",") if k]
        return _json_response(
            workflow.dataset_risk_doc(ctx, dataset_ref, key_list, threshold=threshold)
        )

    return app


def mount_ui(app: FastAPI, ui_dir: str | Path) -> None:
    """Serve a built static bundle at the root path (API keeps /v1)."""
    from fastapi.staticfiles import StaticFiles

    app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
